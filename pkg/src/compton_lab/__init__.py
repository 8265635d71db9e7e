"""Numerical simulator of a Compton-scattering-based Mach-Zehnder interferometer."""

from .errors import (
    ComptonLabError,
    DomainError,
    NoSolutionError,
    ToleranceError,
    UnsupportedConfigurationError,
)
from .kinematics import (
    CODATA2018,
    PhysicalConstants,
    RecoilResult,
    ScatteringConfig,
    compton_shift,
    config_from_epsilon,
    conservation_residual,
    make_config,
    recoil,
    wavelength_ratio,
)
from .klein_nishina import (
    CrossSectionValue,
    diff_cross_section,
    kn_dimensionless,
    thomson_reference,
    xsection_minimum,
)
from .angle_solver import (
    AnglePair,
    contour_theta1,
    delta_lambda_rel,
    EquiprobableCurve,
    curve_start,
    equiprobable_curve,
    equiprobable_partner,
    make_pair,
    max_delta_lambda_rel,
    near_partner,
    select_pair,
)
from .spectral import MarkerOverlap, SpectralLine, amplitude, overlap_closed, overlap_quadrature
from .interferometer import (
    InterferometerModel,
    ReducedState,
    build_model,
    detection_probability,
    distinguishability,
    marker_traced_density,
    reduced_density,
    visibility_from_scan,
)

__version__ = "0.1.0"

#: epsilon for a 1 Angstrom incident photon
EPSILON_A = CODATA2018.compton_wavelength / 1e-10
