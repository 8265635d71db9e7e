"""Two-path state algebra for the Compton-assisted Mach-Zehnder interferometer.

Path 1 picks up a factor i at each reflection and the relative phase phi.
The marker (photon wavelength) overlap A between the arms controls the
fringe contrast seen by the detector on path 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .angle_solver import AnglePair
from .errors import DomainError, ToleranceError
from .kinematics import CODATA2018
from .spectral import MarkerOverlap, SpectralLine, overlap_closed

PROBABILITY_SLACK = 1e-12


@dataclass(frozen=True)
class InterferometerModel:
    pair: AnglePair
    lines: tuple[SpectralLine, SpectralLine]
    overlap: MarkerOverlap
    phase_convention: str = "i per reflection"


@dataclass(frozen=True)
class ReducedState:
    """2x2 density matrix over the path basis {|0>, |1>}."""

    matrix: np.ndarray

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    @property
    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))


def build_model(epsilon: float, pair: AnglePair, sigma_over_lambda0: float) -> InterferometerModel:
    """Put equal-width Gaussian marker lines on the two arms of `pair`.

    Equiprobability of the pair gives both arms the same amplitude, so the
    state after the first device has the balanced two-path form.
    """
    if not (math.isfinite(sigma_over_lambda0) and sigma_over_lambda0 > 0):
        raise DomainError(f"sigma_over_lambda0 must be positive, got {sigma_over_lambda0!r}")
    sigma = sigma_over_lambda0 * CODATA2018.compton_wavelength / epsilon
    lines = (SpectralLine(pair.lambda_theta0, sigma), SpectralLine(pair.lambda_theta1, sigma))
    return InterferometerModel(pair, lines, overlap_closed(*lines))


def reduced_density(overlap: MarkerOverlap, phi: float) -> ReducedState:
    s = overlap.magnitude * math.sin(phi + overlap.phase)
    c = overlap.magnitude * math.cos(phi + overlap.phase)
    return ReducedState(0.5 * np.array([[1.0 - s, c], [c, 1.0 + s]], dtype=complex))


def marker_traced_density(overlap: MarkerOverlap, phi: float, recoil_overlap: complex = 1.0) -> ReducedState:
    """Reduced path state from the explicit pure state after the second beam-splitter.

    Marker kets are written in an orthonormal frame where <a|b> = A; an
    optional recoil label per arm, with overlap `recoil_overlap`, is
    appended and traced out together with the marker.
    """

    def ket_pair(z: complex) -> tuple[np.ndarray, np.ndarray]:
        r = abs(z)
        if r > 1.0:
            raise DomainError(f"overlap magnitude {r} exceeds 1")
        return np.array([1.0, 0.0], complex), np.array([z, math.sqrt(max(0.0, 1.0 - r * r))], complex)

    m0, m1 = ket_pair(overlap.complex)
    e0, e1 = ket_pair(recoil_overlap)
    m0 = np.kron(m0, e0)
    m1 = np.kron(m1, e1)
    path0 = np.array([1.0, 0.0], complex)
    path1 = np.array([0.0, 1.0], complex)
    phase = complex(math.cos(phi), math.sin(phi))
    psi = 0.5 * (
        np.kron(path0, m0) + 1j * np.kron(path1, m0)
        + phase * (1j * np.kron(path0, m1) + np.kron(path1, m1))
    )
    d = m0.size
    rho = np.outer(psi, psi.conj()).reshape(2, d, 2, d)
    return ReducedState(np.einsum("imjm->ij", rho))


def detection_probability(overlap: MarkerOverlap, phi):
    """Probability of a click on the path-0 detector; vectorized over `phi`."""
    p = 0.5 * (1.0 - overlap.magnitude * np.sin(np.asarray(phi, dtype=float) + overlap.phase))
    if np.any(p < -PROBABILITY_SLACK) or np.any(p > 1.0 + PROBABILITY_SLACK):
        raise ToleranceError(f"detection probability outside [0, 1]: {p!r}")
    return p


def visibility_from_scan(p_samples) -> float:
    """Fringe contrast (max - min) / (max + min) of a p_D(phi) scan.

    Args:
        p_samples: sequence of (phi, p_D) rows, or an (n, 2) array.

    Raises:
        DomainError: fewer than 32 samples or less than one full 2 pi period.
    """
    data = np.asarray(p_samples, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2:
        raise DomainError("p_samples must be a sequence of (phi, p) pairs")
    if data.shape[0] < 32:
        raise DomainError(f"need at least 32 samples, got {data.shape[0]}")
    phi, p = data[:, 0], data[:, 1]
    if np.ptp(phi) < 2.0 * math.pi - 1e-9:
        raise DomainError("scan must cover a full 2 pi period of phi")
    hi, lo = float(np.max(p)), float(np.min(p))
    if hi + lo == 0.0:
        return 0.0
    return (hi - lo) / (hi + lo)


def distinguishability(overlap: MarkerOverlap) -> float:
    """Path distinguishability sqrt(1 - |A|^2); D^2 + V^2 = 1 with V = |A|."""
    return math.sqrt(max(0.0, 1.0 - overlap.magnitude**2))
