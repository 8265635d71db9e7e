import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from compton_lab import (
    MarkerOverlap,
    build_model,
    detection_probability,
    distinguishability,
    equiprobable_partner,
    make_pair,
    marker_traced_density,
    overlap_quadrature,
    reduced_density,
    select_pair,
    visibility_from_scan,
    xsection_minimum,
    DomainError,
)

from conftest import EPS_10A

magnitudes = st.floats(0.0, 1.0)
angles = st.floats(-10.0, 10.0)


def scan(overlap, n):
    phi = np.linspace(0.0, 2 * math.pi, n)
    return np.column_stack([phi, detection_probability(overlap, phi)])


class TestModel:
    def test_red_circle(self):
        t0 = 1.075
        m = build_model(EPS_10A, make_pair(EPS_10A, t0, equiprobable_partner(EPS_10A, t0)), 0.1)
        assert m.overlap.magnitude == pytest.approx(0.041, abs=1e-3)
        assert m.lines[0].center == m.pair.lambda_theta0
        assert m.lines[1].center == m.pair.lambda_theta1

    def test_blue_circle(self):
        m = build_model(EPS_10A, make_pair(EPS_10A, 1.590, equiprobable_partner(EPS_10A, 1.590)), 0.1)
        assert m.overlap.magnitude == pytest.approx(0.886, abs=1e-3)

    def test_degenerate(self):
        theta_min, _ = xsection_minimum(EPS_10A)
        m = build_model(EPS_10A, make_pair(EPS_10A, theta_min, theta_min), 0.1)
        assert m.overlap.magnitude == 1.0

    def test_overlap_recomputes_by_quadrature(self):
        for target in (0.02, 0.1, 0.27):
            m = build_model(EPS_10A, select_pair(EPS_10A, target), 0.1)
            assert overlap_quadrature(*m.lines).magnitude == pytest.approx(m.overlap.magnitude, abs=1e-8)

    def test_sigma_domain(self):
        theta_min, _ = xsection_minimum(EPS_10A)
        with pytest.raises(DomainError):
            build_model(EPS_10A, make_pair(EPS_10A, theta_min, theta_min), 0.0)


class TestReducedDensity:
    def test_fully_mixed(self):
        rho = reduced_density(MarkerOverlap(0.0), 1.234).matrix
        assert np.allclose(rho, 0.5 * np.eye(2), atol=1e-16)

    def test_pure_on_path_one(self):
        rho = reduced_density(MarkerOverlap(1.0), math.pi / 2).matrix
        assert np.allclose(rho, np.diag([0.0, 1.0]), atol=1e-16)

    def test_random_states(self):
        rng = np.random.default_rng(11)
        for a, phi in zip(rng.uniform(0, 1, 1000), rng.uniform(0, 2 * math.pi, 1000)):
            st_ = reduced_density(MarkerOverlap(a), phi)
            assert abs(st_.trace - 1) < 1e-12
            assert st_.hermiticity_error() < 1e-14
            ev = st_.eigenvalues()
            assert ev.min() > -1e-12 and ev.max() < 1 + 1e-12
            assert st_.purity == pytest.approx((1 + a * a) / 2, abs=1e-12)

    @given(magnitudes, st.floats(-math.pi, math.pi), angles)
    def test_entry_equals_detection_probability(self, a, delta, phi):
        ov = MarkerOverlap(a, delta)
        assert reduced_density(ov, phi).matrix[0, 0].real == detection_probability(ov, phi)

    @given(magnitudes, st.floats(-math.pi, math.pi), angles)
    def test_marker_trace_equivalence(self, a, delta, phi):
        ov = MarkerOverlap(a, delta)
        direct = reduced_density(ov, phi).matrix
        traced = marker_traced_density(ov, phi).matrix
        assert np.max(np.abs(direct - traced)) < 1e-14

    @given(magnitudes, angles)
    def test_locked_recoil_label(self, a, phi):
        ov = MarkerOverlap(a)
        with_recoil = marker_traced_density(ov, phi, recoil_overlap=1.0).matrix
        assert np.max(np.abs(with_recoil - reduced_density(ov, phi).matrix)) < 1e-14

    def test_orthogonal_recoil_erases_fringes(self):
        rho = marker_traced_density(MarkerOverlap(0.9), 0.3, recoil_overlap=0.0).matrix
        assert np.allclose(rho, 0.5 * np.eye(2), atol=1e-15)


class TestDetectionProbability:
    def test_which_way_known(self):
        phi = np.linspace(0, 2 * math.pi, 17)
        assert np.all(detection_probability(MarkerOverlap(0.0), phi) == 0.5)

    def test_wave_limit(self):
        phi = np.linspace(-3, 9, 101)
        assert np.allclose(detection_probability(MarkerOverlap(1.0), phi), np.sin((phi - math.pi / 2) / 2) ** 2, atol=1e-15)

    def test_dark_port(self):
        assert detection_probability(MarkerOverlap(1.0), math.pi / 2) == 0.0

    @given(magnitudes, angles)
    def test_unit_interval(self, a, phi):
        assert 0.0 <= detection_probability(MarkerOverlap(a), phi) <= 1.0


class TestVisibility:
    def test_full_contrast(self):
        assert visibility_from_scan(scan(MarkerOverlap(1.0), 64)) == pytest.approx(1.0, abs=1e-3)

    def test_partial_contrast(self):
        assert visibility_from_scan(scan(MarkerOverlap(math.exp(-1)), 64)) == pytest.approx(0.3679, abs=1e-3)

    def test_constant(self):
        phi = np.linspace(0, 2 * math.pi, 40)
        assert visibility_from_scan(list(zip(phi, [0.5] * 40))) == 0.0

    @given(magnitudes)
    def test_fringe_amplitude_identity(self, a):
        n = 256
        assert abs(visibility_from_scan(scan(MarkerOverlap(a), n)) - a) <= 2 / n**2

    def test_coverage(self):
        with pytest.raises(DomainError):
            visibility_from_scan(scan(MarkerOverlap(1.0), 16))
        phi = np.linspace(0, math.pi, 64)
        with pytest.raises(DomainError):
            visibility_from_scan(np.column_stack([phi, phi]))


class TestDistinguishability:
    @pytest.mark.parametrize("a,d", [(1.0, 0.0), (0.0, 1.0), (0.6, 0.8)])
    def test_values(self, a, d):
        assert distinguishability(MarkerOverlap(a)) == pytest.approx(d, abs=1e-15)

    @given(magnitudes)
    def test_complementarity(self, a):
        assert distinguishability(MarkerOverlap(a)) ** 2 + a**2 == pytest.approx(1.0, abs=1e-15)
