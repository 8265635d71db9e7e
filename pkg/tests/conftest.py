import math

import pytest
from hypothesis import settings

from compton_lab import EPSILON_A

settings.register_profile("default", deadline=None)
settings.load_profile("default")

EPS_A = EPSILON_A
EPS_10A = 10 * EPSILON_A


@pytest.fixture
def eps10():
    return EPS_10A


def brute_partner(kn, epsilon, theta0, theta_min, step=1e-4):
    """Grid argmin of |kn(theta) - kn(theta0)| over the far branch."""
    import numpy as np

    grid = np.arange(theta_min, math.pi + step / 2, step)
    vals = np.abs(kn(epsilon, np.clip(grid, 0, math.pi)) - kn(epsilon, theta0))
    return float(grid[np.argmin(vals)])


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
