"""Equiprobable scattering-angle pairs and relative wavelength differences.

The cross section is unimodal on [0, pi] with minimizer theta_min. Angles
below theta_min form the near branch, angles above it the far branch; a
pair always holds the near-branch angle in `theta0` and the far-branch
angle in `theta1`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from .errors import DomainError, NoSolutionError, ToleranceError
from .kinematics import CODATA2018, _check_angle, wavelength_ratio
from .klein_nishina import kn_dimensionless, xsection_minimum

ANGLE_XTOL = 1e-12
XSECTION_TOL = 1e-10


@dataclass(frozen=True)
class AnglePair:
    theta0: float
    theta1: float
    epsilon: float
    xsection: float
    delta_lambda_rel: float
    lambda_theta0: float
    lambda_theta1: float


@dataclass(frozen=True)
class EquiprobableCurve:
    """Pairs sampled along the curve, ordered by theta0."""

    pairs: list[AnglePair]
    omitted: int


def _kn(epsilon: float, theta: float) -> float:
    return float(kn_dimensionless(epsilon, theta))


def make_pair(epsilon: float, theta0: float, theta1: float, check: bool = True) -> AnglePair:
    """Assemble an AnglePair, verifying equiprobability when `check` is set."""
    s0 = _kn(epsilon, theta0)
    s1 = _kn(epsilon, theta1)
    if check and abs(s0 - s1) >= XSECTION_TOL:
        raise ToleranceError(
            f"angles ({theta0}, {theta1}) are not equiprobable: |dsigma| = {abs(s0 - s1):.3e}"
        )
    lambda0 = CODATA2018.compton_wavelength / epsilon
    return AnglePair(
        theta0=float(theta0),
        theta1=float(theta1),
        epsilon=float(epsilon),
        xsection=s0,
        delta_lambda_rel=delta_lambda_rel(epsilon, theta0, theta1),
        lambda_theta0=lambda0 * float(wavelength_ratio(epsilon, theta0)),
        lambda_theta1=lambda0 * float(wavelength_ratio(epsilon, theta1)),
    )


def delta_lambda_rel(epsilon: float, theta0, theta1):
    """|lambda_1 - lambda_0| divided by the mean of the two wavelengths."""
    a = wavelength_ratio(epsilon, theta0)
    b = wavelength_ratio(epsilon, theta1)
    out = np.abs(b - a) / (0.5 * (a + b))
    return float(out) if np.ndim(out) == 0 else out


def equiprobable_partner(epsilon: float, theta0: float) -> float:
    """Far-branch angle with the same cross section as `theta0`.

    Raises:
        DomainError: theta0 lies beyond the cross-section minimum.
        NoSolutionError: the far branch never climbs back to the value at
            theta0 (theta0 is closer to forward scattering than the curve
            start).
    """
    theta_min, _ = xsection_minimum(epsilon)
    _check_angle(theta0)
    if theta0 > theta_min:
        raise DomainError(f"theta0={theta0} must not exceed theta_min={theta_min}")
    if theta0 == theta_min:
        return theta_min
    level = _kn(epsilon, theta0)
    top = _kn(epsilon, math.pi) - level
    if top < 0.0:
        raise NoSolutionError(
            f"no equiprobable partner for theta0={theta0} at epsilon={epsilon}"
        )
    if top == 0.0:
        return math.pi
    return bisect(lambda t: _kn(epsilon, t) - level, theta_min, math.pi, xtol=ANGLE_XTOL)


def near_partner(epsilon: float, theta1: float) -> float:
    """Near-branch angle with the same cross section as far-branch `theta1`.

    Always exists, since the forward value 1 bounds the far branch.
    """
    theta_min, _ = xsection_minimum(epsilon)
    _check_angle(theta1)
    if theta1 < theta_min:
        raise DomainError(f"theta1={theta1} must not be below theta_min={theta_min}")
    if theta1 == theta_min:
        return theta_min
    level = _kn(epsilon, theta1)
    return bisect(lambda t: _kn(epsilon, t) - level, 0.0, theta_min, xtol=ANGLE_XTOL)


def curve_start(epsilon: float) -> float:
    """Smallest theta0 that still has a partner (its partner is pi)."""
    return near_partner(epsilon, math.pi)


def equiprobable_curve(epsilon: float, n_points: int) -> EquiprobableCurve:
    """Sample the curve at `n_points` uniform theta0 values in [0, theta_min].

    Values of theta0 with no partner are skipped and counted in `omitted`.
    The last sample is the degenerate pair (theta_min, theta_min).
    """
    if n_points < 2:
        raise DomainError("n_points must be at least 2")
    theta_min, _ = xsection_minimum(epsilon)
    pairs = []
    omitted = 0
    for t0 in np.linspace(0.0, theta_min, n_points):
        t0 = float(t0)
        try:
            t1 = equiprobable_partner(epsilon, t0)
        except NoSolutionError:
            omitted += 1
            continue
        pairs.append(make_pair(epsilon, t0, t1))
    return EquiprobableCurve(pairs, omitted)


def contour_theta1(epsilon: float, theta0: float, target: float) -> float:
    """Angle theta1 > theta0 at which the relative difference equals `target`."""
    if not 0.0 <= target < 2.0:
        raise DomainError(f"target must lie in [0, 2), got {target!r}")
    _check_angle(theta0)
    if target == 0.0:
        return float(theta0)
    half = 0.5 * target
    cos1 = (math.cos(theta0) * epsilon * (1.0 + half) - target * (1.0 + epsilon)) / (
        epsilon * (1.0 - half)
    )
    if not -1.0 <= cos1 <= 1.0:
        raise NoSolutionError(
            f"contour {target} does not reach theta0={theta0} at epsilon={epsilon}"
        )
    return math.acos(cos1)


def _curve_dlrel(epsilon: float, theta0: float) -> float:
    try:
        t1 = equiprobable_partner(epsilon, theta0)
    except NoSolutionError:
        # only reachable by rounding at the curve start
        t1 = math.pi
    return float(delta_lambda_rel(epsilon, theta0, t1))


def max_delta_lambda_rel(epsilon: float) -> tuple[float, AnglePair]:
    """Largest relative difference along the curve, reached at its start.

    The relative difference falls monotonically as theta0 moves toward
    theta_min, so the maximum sits at the pair (curve_start, pi).
    """
    theta_min, _ = xsection_minimum(epsilon)
    if theta_min == math.pi:
        pair = make_pair(epsilon, math.pi, math.pi)
        return 0.0, pair
    pair = make_pair(epsilon, curve_start(epsilon), math.pi)
    return pair.delta_lambda_rel, pair


def select_pair(epsilon: float, target_dlrel: float) -> AnglePair:
    """Equiprobable pair whose relative wavelength difference equals `target_dlrel`."""
    if not (math.isfinite(target_dlrel) and target_dlrel >= 0.0):
        raise DomainError(f"target_dlrel must be non-negative, got {target_dlrel!r}")
    theta_min, _ = xsection_minimum(epsilon)
    if target_dlrel == 0.0:
        return make_pair(epsilon, theta_min, theta_min)
    best, start_pair = max_delta_lambda_rel(epsilon)
    if target_dlrel > best:
        raise NoSolutionError(
            f"target {target_dlrel} exceeds the curve maximum {best:.6g} at epsilon={epsilon}"
        )
    if target_dlrel == best:
        return start_pair
    theta0 = bisect(
        lambda t: _curve_dlrel(epsilon, t) - target_dlrel,
        start_pair.theta0,
        theta_min,
        xtol=ANGLE_XTOL,
    )
    return make_pair(epsilon, theta0, equiprobable_partner(epsilon, theta0))
