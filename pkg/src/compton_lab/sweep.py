"""Grids behind the detection-probability and cross-section figures.

Rows are independent, so they may be computed on a thread pool; results
are always assembled in axis order.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import angle_solver, spectral
from .angle_solver import EquiprobableCurve, contour_theta1, equiprobable_curve, make_pair, near_partner
from .errors import DomainError, NoSolutionError, ToleranceError
from .interferometer import build_model, detection_probability
from .kinematics import CODATA2018
from .klein_nishina import kn_dimensionless, xsection_minimum
from .spectral import MarkerOverlap

THREADS_ENV = "COMPTON_LAB_THREADS"

DEFAULT_PHI_POINTS = 256
DEFAULT_ZETA_POINTS = 128
DEFAULT_ZETA_MAX = 5.0
DEFAULT_THETA_POINTS = 512
DEFAULT_THETA1_POINTS = 128


@dataclass(frozen=True)
class Axis:
    name: str
    units: str
    values: np.ndarray


@dataclass
class SweepGrid:
    """Row-major matrix of values over (y_axis, x_axis).

    `row_aux` holds extra per-row series aligned with the y axis.
    """

    x_axis: Axis
    y_axis: Axis
    values: np.ndarray
    value_name: str
    value_units: str = "1"
    metadata: dict = field(default_factory=dict)
    row_aux: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        shape = (len(self.y_axis.values), len(self.x_axis.values))
        if self.values.shape != shape:
            raise ToleranceError(f"grid values have shape {self.values.shape}, expected {shape}")
        if not np.all(np.isfinite(self.values)):
            raise ToleranceError("grid contains non-finite values")


@dataclass
class Fig3Panel:
    epsilon: float
    theta_grid: np.ndarray
    xsection: np.ndarray
    curve: EquiprobableCurve
    contours: dict  # target -> list of (theta0, theta1)


def resolve_threads(threads: int | None = None) -> int:
    """Thread count from the argument, else the environment, else 1."""
    if threads is None:
        raw = os.environ.get(THREADS_ENV)
        if raw is None or raw.strip() == "":
            return 1
        try:
            threads = int(raw)
        except ValueError:
            raise DomainError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if threads < 1:
        raise DomainError(f"thread count must be positive, got {threads}")
    return threads


def _map_rows(fn, items, threads):
    items = list(items)
    if threads == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def base_metadata(**extra) -> dict:
    from . import __version__

    meta = {
        "artifact_version": __version__,
        "constants": {
            "h": CODATA2018.h,
            "c": CODATA2018.c,
            "m_e": CODATA2018.m_e,
            "compton_wavelength": CODATA2018.compton_wavelength,
            "classical_electron_radius": CODATA2018.classical_electron_radius,
        },
        "tolerances": {
            "angle_xtol": angle_solver.ANGLE_XTOL,
            "xsection_tol": angle_solver.XSECTION_TOL,
            "quad_epsabs": spectral.QUAD_EPSABS,
        },
    }
    meta.update(extra)
    return meta


def default_phi_grid(n: int = DEFAULT_PHI_POINTS) -> np.ndarray:
    return np.linspace(0.0, 2.0 * math.pi, n)


def default_zeta_grid(n: int = DEFAULT_ZETA_POINTS, zeta_max: float = DEFAULT_ZETA_MAX) -> np.ndarray:
    return np.linspace(0.0, zeta_max, n)


def default_theta_grid(n: int = DEFAULT_THETA_POINTS) -> np.ndarray:
    return np.linspace(0.0, math.pi, n)


def default_theta1_grid(epsilon: float, n: int = DEFAULT_THETA1_POINTS) -> np.ndarray:
    """`n` uniform points in (theta_min, pi]."""
    theta_min, _ = xsection_minimum(epsilon)
    return np.linspace(theta_min, math.pi, n + 1)[1:]


def _as_grid(values, name) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0 or not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be a nonempty finite 1-D sequence")
    return arr


def fig2_surface(phi_grid, zeta_grid, threads: int | None = None) -> SweepGrid:
    """p_D(phi) for equal-width Gaussian markers separated by zeta widths."""
    phi = _as_grid(phi_grid, "phi_grid")
    zeta = _as_grid(zeta_grid, "zeta_grid")

    def row(z):
        return detection_probability(MarkerOverlap(math.exp(-0.25 * z * z)), phi)

    values = _map_rows(row, zeta, resolve_threads(threads))
    return SweepGrid(
        Axis("phi", "rad", phi),
        Axis("zeta", "1", zeta),
        np.array(values),
        "p_D",
        metadata=base_metadata(figure="fig2"),
    )


def fig3a_curves(epsilons, theta_grid) -> SweepGrid:
    """Cross-section curves, one row per epsilon."""
    theta = _as_grid(theta_grid, "theta_grid")
    eps = _as_grid(epsilons, "epsilons")
    values = np.array([kn_dimensionless(float(e), theta) for e in eps])
    return SweepGrid(
        Axis("theta", "rad", theta),
        Axis("epsilon", "1", eps),
        values,
        "xsection",
        "r0^2/sr",
        metadata=base_metadata(figure="fig3a"),
    )


def fig3_panel(epsilon: float, theta_grid, contour_targets, threads: int | None = None) -> Fig3Panel:
    """Cross section, equiprobable curve and relative-difference contours.

    The curve is sampled at as many theta0 values as `theta_grid` has
    points. Contours are traced over `theta_grid` as theta0; points the
    contour does not reach are dropped. Only the theta1 > theta0 half-plane
    is emitted.
    """
    theta = _as_grid(theta_grid, "theta_grid")
    targets = [float(t) for t in contour_targets]
    for t in targets:
        if not 0.0 < t < 2.0:
            raise DomainError(f"contour targets must lie in (0, 2), got {t}")

    def trace(target):
        line = []
        for t0 in theta:
            try:
                t1 = contour_theta1(epsilon, float(t0), target)
            except NoSolutionError:
                continue
            if t1 > t0:
                line.append((float(t0), t1))
        return line

    contours = dict(zip(targets, _map_rows(trace, targets, resolve_threads(threads))))
    return Fig3Panel(
        float(epsilon),
        theta,
        kn_dimensionless(epsilon, theta),
        equiprobable_curve(epsilon, len(theta)),
        contours,
    )


def contour_crossings(curve: EquiprobableCurve, target: float) -> list[tuple[float, float]]:
    """Points where the equiprobable curve crosses the contour at `target`.

    Crossings are located between consecutive curve samples by linear
    interpolation of the relative difference.
    """
    out = []
    pairs = curve.pairs
    for a, b in zip(pairs, pairs[1:]):
        fa = a.delta_lambda_rel - target
        fb = b.delta_lambda_rel - target
        if fa == 0.0:
            out.append((a.theta0, a.theta1))
        elif fa * fb < 0.0:
            w = fa / (fa - fb)
            out.append((a.theta0 + w * (b.theta0 - a.theta0), a.theta1 + w * (b.theta1 - a.theta1)))
    return out


def fig4_surface(
    epsilon: float,
    sigma_over_lambda0: float,
    phi_grid,
    theta1_grid,
    threads: int | None = None,
) -> SweepGrid:
    """p_D(phi) along the equiprobable curve, one row per far-branch angle.

    Each row solves for the near-branch partner of theta1 and puts
    Gaussian markers of width sigma_over_lambda0 * lambda0 on both arms.
    Rows without a partner are omitted and counted in the metadata.
    """
    phi = _as_grid(phi_grid, "phi_grid")
    theta1 = _as_grid(theta1_grid, "theta1_grid")
    theta_min, _ = xsection_minimum(epsilon)
    if np.any(theta1 < theta_min) or np.any(theta1 > math.pi):
        raise DomainError("theta1 rows must lie in [theta_min, pi]")

    def row(t1):
        try:
            t0 = near_partner(epsilon, float(t1))
        except NoSolutionError:
            return None
        model = build_model(epsilon, make_pair(epsilon, t0, float(t1)), sigma_over_lambda0)
        return t0, model.overlap.magnitude, detection_probability(model.overlap, phi)

    results = _map_rows(row, theta1, resolve_threads(threads))
    kept = [(t1, r) for t1, r in zip(theta1, results) if r is not None]
    omitted = len(results) - len(kept)
    return SweepGrid(
        Axis("phi", "rad", phi),
        Axis("theta1", "rad", np.array([t1 for t1, _ in kept])),
        np.array([r[2] for _, r in kept]).reshape(len(kept), phi.size),
        "p_D",
        metadata=base_metadata(
            figure="fig4b",
            epsilon=float(epsilon),
            sigma_over_lambda0=float(sigma_over_lambda0),
            theta_min=theta_min,
            omitted_rows=omitted,
        ),
        row_aux={
            "theta0": np.array([r[0] for _, r in kept]),
            "overlap_magnitude": np.array([r[1] for _, r in kept]),
        },
    )
