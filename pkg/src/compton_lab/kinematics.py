"""Photon-electron scattering kinematics.

Lengths are in meters, energies in joules, angles in radians. Scattering
angles are polar angles in [0, pi] measured from the incident direction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA 2018 constants (SI)."""

    h: float = 6.62607015e-34
    c: float = 299792458.0
    m_e: float = 9.1093837015e-31
    e: float = 1.602176634e-19
    epsilon_0: float = 8.8541878128e-12

    @property
    def compton_wavelength(self) -> float:
        return self.h / (self.m_e * self.c)

    @property
    def electron_rest_energy(self) -> float:
        return self.m_e * self.c**2

    @property
    def classical_electron_radius(self) -> float:
        return self.e**2 / (4.0 * math.pi * self.epsilon_0 * self.m_e * self.c**2)


CODATA2018 = PhysicalConstants()


@dataclass(frozen=True)
class ScatteringConfig:
    lambda0: float
    epsilon: float
    constants: PhysicalConstants = field(default=CODATA2018)


@dataclass(frozen=True)
class RecoilResult:
    """Final electron state after scattering.

    Attributes:
        p_m: electron momentum magnitude (kg m/s).
        theta_m: recoil polar angle from the incident direction, on the
            opposite side of the axis from the scattered photon.
        E_m: total electron energy (J).
        photon_out: (lambda_theta in m, theta in rad) of the scattered photon.
    """

    p_m: float
    theta_m: float
    E_m: float
    photon_out: tuple[float, float]


def _check_angle(theta) -> None:
    t = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(t)) or np.any(t < 0.0) or np.any(t > math.pi):
        raise DomainError(f"scattering angle must lie in [0, pi], got {theta!r}")


def make_config(lambda0: float, constants: PhysicalConstants = CODATA2018) -> ScatteringConfig:
    """Build a config for incident wavelength `lambda0` (m)."""
    if not (isinstance(lambda0, (int, float)) and math.isfinite(lambda0) and lambda0 > 0):
        raise DomainError(f"lambda0 must be positive and finite, got {lambda0!r}")
    lambda0 = float(lambda0)
    return ScatteringConfig(lambda0, constants.compton_wavelength / lambda0, constants)


def config_from_epsilon(epsilon: float, constants: PhysicalConstants = CODATA2018) -> ScatteringConfig:
    """Build a config from the dimensionless energy ratio instead of a wavelength."""
    if not (math.isfinite(epsilon) and epsilon > 0):
        raise DomainError(f"epsilon must be positive and finite, got {epsilon!r}")
    return ScatteringConfig(constants.compton_wavelength / epsilon, float(epsilon), constants)


def compton_shift(cfg: ScatteringConfig, theta):
    """Wavelength of the photon scattered at `theta` (m)."""
    _check_angle(theta)
    return cfg.lambda0 + cfg.constants.compton_wavelength * (1.0 - np.cos(theta))


def wavelength_ratio(epsilon: float, theta):
    """lambda_theta / lambda0 = 1 + epsilon (1 - cos theta)."""
    if not epsilon > 0:
        raise DomainError(f"epsilon must be positive, got {epsilon!r}")
    _check_angle(theta)
    return 1.0 + epsilon * (1.0 - np.cos(theta))


def recoil(cfg: ScatteringConfig, theta: float) -> RecoilResult:
    """Electron recoil from componentwise energy-momentum conservation.

    The incident photon travels along +z; the scattered photon leaves in
    the (z, x) plane with x >= 0, so the electron goes to x <= 0.
    """
    _check_angle(theta)
    k = cfg.constants
    mc2 = k.electron_rest_energy
    lam = float(compton_shift(cfg, theta))
    if theta == 0.0:
        return RecoilResult(0.0, 0.0, mc2, (lam, 0.0))
    p_in = k.h / cfg.lambda0
    p_out = k.h / lam
    pz = p_in - p_out * math.cos(theta)
    px = -p_out * math.sin(theta)
    p_m = math.hypot(pz, px)
    theta_m = math.atan2(-px, pz)
    E_m = mc2 + k.h * k.c * (1.0 / cfg.lambda0 - 1.0 / lam)
    return RecoilResult(p_m, theta_m, E_m, (lam, float(theta)))


def conservation_residual(cfg: ScatteringConfig, theta: float, r: RecoilResult) -> tuple[float, float]:
    """Relative (energy, momentum) conservation residuals of a recoil result.

    The electron energy is re-derived from its momentum through the
    mass-shell relation, so the energy residual also tests the Compton
    formula used for the outgoing wavelength.
    """
    k = cfg.constants
    mc2 = k.electron_rest_energy
    lam = r.photon_out[0]
    th = theta
    e_photon_in = k.h * k.c / cfg.lambda0
    # kinetic energy in the cancellation-free form p^2c^2 / (E + mc^2)
    pc = r.p_m * k.c
    kinetic = pc * pc / (math.sqrt(pc * pc + mc2 * mc2) + mc2)
    energy_res = abs(e_photon_in - k.h * k.c / lam - kinetic) / (e_photon_in + mc2)

    p_in = k.h / cfg.lambda0
    out = k.h / lam
    dz = p_in - out * math.cos(th) - r.p_m * math.cos(r.theta_m)
    dx = -out * math.sin(th) + r.p_m * math.sin(r.theta_m)
    momentum_res = math.hypot(dz, dx) / p_in
    return energy_res, momentum_res
