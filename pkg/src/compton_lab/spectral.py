"""Gaussian wavelength amplitudes for the which-way marker and their overlap."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, ToleranceError, UnsupportedConfigurationError

TRUNCATION_SIGMAS = 8.0
QUAD_EPSABS = 1e-10
EQUAL_WIDTH_RTOL = 1e-12


@dataclass(frozen=True)
class SpectralLine:
    """L2-normalized Gaussian amplitude centred at `center` with width `sigma` (m)."""

    center: float
    sigma: float
    shape: str = "gaussian"

    def __post_init__(self):
        if self.shape != "gaussian":
            raise UnsupportedConfigurationError(f"unsupported line shape {self.shape!r}")
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise DomainError(f"sigma must be positive, got {self.sigma!r}")
        # keeps the mass below lambda = 0 negligible without renormalizing
        if not self.center > TRUNCATION_SIGMAS * self.sigma:
            raise DomainError(
                f"center {self.center!r} must exceed {TRUNCATION_SIGMAS:g} sigma ({self.sigma!r})"
            )


@dataclass(frozen=True)
class MarkerOverlap:
    """Overlap A = |A| exp(i delta) between the two arms' marker states."""

    magnitude: float
    phase: float = 0.0
    zeta: float | None = None

    def __post_init__(self):
        if not 0.0 <= self.magnitude <= 1.0:
            raise DomainError(f"|A| must lie in [0, 1], got {self.magnitude!r}")

    @property
    def complex(self) -> complex:
        return self.magnitude * complex(math.cos(self.phase), math.sin(self.phase))


def amplitude(line: SpectralLine, lam):
    """Amplitude (sigma sqrt(pi))^(-1/2) exp(-(lam - center)^2 / (2 sigma^2))."""
    norm = (line.sigma * math.sqrt(math.pi)) ** -0.5
    return norm * np.exp(-((np.asarray(lam) - line.center) ** 2) / (2.0 * line.sigma**2))


def overlap_closed(a: SpectralLine, b: SpectralLine) -> MarkerOverlap:
    """|A| = exp(-(d lambda)^2 / (4 sigma^2)) for equal-width Gaussians; delta = 0."""
    if abs(a.sigma - b.sigma) > EQUAL_WIDTH_RTOL * max(a.sigma, b.sigma):
        raise UnsupportedConfigurationError(
            "closed-form overlap needs equal widths; use overlap_quadrature"
        )
    zeta = abs(a.center - b.center) / a.sigma
    return MarkerOverlap(math.exp(-0.25 * zeta * zeta), 0.0, zeta)


def overlap_quadrature(a: SpectralLine, b: SpectralLine) -> MarkerOverlap:
    """Integrate the amplitude product over the +-8 sigma support of both lines."""
    scale = max(a.sigma, b.sigma)
    lo = min(a.center, b.center) - TRUNCATION_SIGMAS * scale
    hi = max(a.center, b.center) + TRUNCATION_SIGMAS * scale
    mid = 0.5 * (lo + hi)

    # integrate in units of `scale` around `mid` so quad sees O(1) numbers
    def integrand(u):
        lam = mid + scale * u
        return float(amplitude(a, lam) * amplitude(b, lam)) * scale

    u_lo = (lo - mid) / scale
    u_hi = (hi - mid) / scale
    peaks = sorted({(a.center - mid) / scale, (b.center - mid) / scale})
    value, _ = quad(integrand, u_lo, u_hi, points=peaks, epsabs=QUAD_EPSABS, epsrel=0.0, limit=200)
    if value > 1.0 + 10 * QUAD_EPSABS:
        raise ToleranceError(f"overlap {value!r} violates Cauchy-Schwarz")
    zeta = None
    if abs(a.sigma - b.sigma) <= EQUAL_WIDTH_RTOL * scale:
        zeta = abs(a.center - b.center) / a.sigma
    return MarkerOverlap(min(max(value, 0.0), 1.0), 0.0, zeta)
