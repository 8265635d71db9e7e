"""Unpolarized Klein-Nishina differential cross section.

Values are dimensionless, in units of the squared classical electron
radius; `CrossSectionValue.value_absolute` attaches r0^2 at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import bisect

from .errors import DomainError, ToleranceError
from .kinematics import CODATA2018, _check_angle

MINIMUM_XTOL = 1e-12


@dataclass(frozen=True)
class CrossSectionValue:
    value_dimensionless: float
    epsilon: float
    theta: float

    @property
    def value_absolute(self) -> float:
        """d(sigma)/d(Omega) in m^2/sr."""
        return self.value_dimensionless * CODATA2018.classical_electron_radius**2


def kn_dimensionless(epsilon: float, theta):
    """(1/r0^2) d(sigma)/d(Omega); vectorized over `theta`."""
    if not epsilon > 0:
        raise DomainError(f"epsilon must be positive, got {epsilon!r}")
    _check_angle(theta)
    ratio = 1.0 + epsilon * (1.0 - np.cos(theta))
    q = 1.0 / ratio
    return 0.5 * q * q * (q + ratio - np.sin(theta) ** 2)


def diff_cross_section(epsilon: float, theta: float) -> CrossSectionValue:
    return CrossSectionValue(float(kn_dimensionless(epsilon, theta)), float(epsilon), float(theta))


def thomson_reference(theta):
    """Low-energy limit (1 + cos^2 theta) / 2."""
    _check_angle(theta)
    return 0.5 * (1.0 + np.cos(theta) ** 2)


def _slope_sign_function(epsilon: float, theta):
    # d/dtheta of the cross section is -q^2 sin(theta)/2 times this factor,
    # so the minimizer is its root on (0, pi).
    q = 1.0 / (1.0 + epsilon * (1.0 - np.cos(theta)))
    return epsilon * (3.0 * q * q + 1.0 - 2.0 * q * np.sin(theta) ** 2) + 2.0 * np.cos(theta)


@lru_cache(maxsize=256)
def xsection_minimum(epsilon: float) -> tuple[float, float]:
    """Location and value of the cross-section minimum on [0, pi].

    The minimizer is the sign change of the analytic slope, located by
    bisection to 1e-12 rad. A grid pre-scan rejects epsilon values for
    which the slope changes sign more than once.
    """
    if not (math.isfinite(epsilon) and epsilon > 0):
        raise DomainError(f"epsilon must be positive and finite, got {epsilon!r}")
    grid = np.linspace(0.0, math.pi, 1025)[1:-1]
    signs = np.sign(_slope_sign_function(epsilon, grid))
    if np.count_nonzero(np.diff(signs)) > 1:
        raise ToleranceError(f"cross section is not unimodal for epsilon={epsilon}")
    if _slope_sign_function(epsilon, math.pi) >= 0.0:
        theta_min = math.pi
    else:
        theta_min = bisect(lambda t: _slope_sign_function(epsilon, t), 0.0, math.pi, xtol=MINIMUM_XTOL)
    return theta_min, float(kn_dimensionless(epsilon, theta_min))
