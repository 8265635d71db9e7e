import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from compton_lab import (
    CODATA2018,
    DomainError,
    compton_shift,
    conservation_residual,
    make_config,
    recoil,
    wavelength_ratio,
)
from compton_lab.kinematics import RecoilResult, config_from_epsilon

ANGSTROM = 1e-10
LAMBDA_C = 2.426310238683092353e-12  # h / (m_e c), 40-digit mpmath evaluation


class TestConstants:
    def test_compton_wavelength(self):
        assert CODATA2018.compton_wavelength == pytest.approx(2.42631e-12, rel=1e-6)
        assert CODATA2018.compton_wavelength == pytest.approx(LAMBDA_C, rel=1e-15)

    def test_derived_values_positive(self):
        k = CODATA2018
        for v in (k.h, k.c, k.m_e, k.compton_wavelength, k.electron_rest_energy, k.classical_electron_radius):
            assert v > 0

    def test_classical_radius(self):
        assert CODATA2018.classical_electron_radius == pytest.approx(2.8179403262e-15, rel=1e-10)


class TestMakeConfig:
    def test_one_angstrom(self):
        cfg = make_config(ANGSTROM)
        assert cfg.epsilon == pytest.approx(0.0243, abs=5e-4)
        assert cfg.epsilon == CODATA2018.compton_wavelength / ANGSTROM

    def test_compton_wavelength_gives_unity(self):
        assert make_config(CODATA2018.compton_wavelength).epsilon == 1.0

    def test_tenth_angstrom(self):
        assert make_config(0.1 * ANGSTROM).epsilon == pytest.approx(0.2426310238683092, rel=1e-14)

    @pytest.mark.parametrize("bad", [0.0, -1e-10, float("inf"), float("nan")])
    def test_rejects_bad_wavelength(self, bad):
        with pytest.raises(DomainError):
            make_config(bad)

    def test_from_epsilon_round_trip(self):
        cfg = config_from_epsilon(0.24263)
        assert cfg.lambda0 * cfg.epsilon == pytest.approx(CODATA2018.compton_wavelength, rel=1e-15)


class TestShift:
    def test_forward_no_shift(self):
        assert compton_shift(make_config(ANGSTROM), 0.0) == ANGSTROM

    def test_right_angle(self):
        shift = compton_shift(make_config(ANGSTROM), math.pi / 2) - ANGSTROM
        assert shift == pytest.approx(2.4e-12, rel=0.015)
        assert shift == pytest.approx(LAMBDA_C, rel=1e-9)

    def test_backscatter(self):
        assert compton_shift(make_config(ANGSTROM), math.pi) / ANGSTROM == pytest.approx(
            1.048526204773661847, rel=1e-14
        )

    @pytest.mark.parametrize("theta", [-1e-9, math.pi + 1e-9, float("nan")])
    def test_domain(self, theta):
        with pytest.raises(DomainError):
            compton_shift(make_config(ANGSTROM), theta)

    def test_bounds_and_monotone(self):
        cfg = make_config(ANGSTROM)
        theta = np.linspace(0, math.pi, 2001)
        lam = compton_shift(cfg, theta)
        assert np.all(np.diff(lam) >= 0)
        assert np.all(lam - ANGSTROM >= 0)
        assert np.all(lam - ANGSTROM <= 2 * cfg.constants.compton_wavelength * (1 + 1e-15))

    @given(st.floats(1e-13, 1e-8), st.floats(0.0, math.pi))
    def test_identity_with_ratio(self, lambda0, theta):
        cfg = make_config(lambda0)
        lam = compton_shift(cfg, theta)
        # machine precision relative to lambda_theta: the subtraction cancels digits
        expected = cfg.constants.compton_wavelength * (1 - math.cos(theta))
        assert abs((lam - lambda0) - expected) <= 4 * np.finfo(float).eps * lam
        assert wavelength_ratio(cfg.epsilon, theta) * lambda0 == pytest.approx(lam, rel=1e-14)


class TestWavelengthRatio:
    def test_red_circle_angle(self):
        value = wavelength_ratio(0.24263, 1.075)
        assert value == pytest.approx(1.1272030858222448, rel=1e-14)
        assert value == pytest.approx(1.1273, abs=2e-4)

    def test_trivial(self):
        assert wavelength_ratio(0.7, 0.0) == 1.0
        assert wavelength_ratio(1.0, math.pi) == 3.0


class TestRecoil:
    def test_forward_is_exact_zero(self):
        cfg = make_config(ANGSTROM)
        r = recoil(cfg, 0.0)
        assert r.p_m == 0.0
        assert r.E_m == cfg.constants.electron_rest_energy
        assert conservation_residual(cfg, 0.0, r) == (0.0, 0.0)

    def test_right_angle_closed_form(self):
        cfg = make_config(ANGSTROM)
        r = recoil(cfg, math.pi / 2)
        assert r.p_m == pytest.approx(9.260355454932993e-24, rel=1e-12)
        assert r.theta_m == pytest.approx(0.7734125966408053, rel=1e-12)

    def test_backscatter_on_axis(self):
        cfg = make_config(0.1 * ANGSTROM)
        r = recoil(cfg, math.pi)
        assert r.p_m == pytest.approx(1.1087283011459314e-22, rel=1e-12)
        assert r.theta_m == pytest.approx(0.0, abs=1e-15)

    def test_mass_shell(self):
        cfg = make_config(0.1 * ANGSTROM)
        k = cfg.constants
        for theta in np.linspace(0, math.pi, 50):
            r = recoil(cfg, theta)
            lhs = r.E_m**2
            rhs = (r.p_m * k.c) ** 2 + k.electron_rest_energy**2
            assert abs(lhs - rhs) / rhs < 1e-12

    def test_residuals_on_fine_grid(self):
        for lambda0 in (ANGSTROM, 0.1 * ANGSTROM):
            cfg = make_config(lambda0)
            worst = 0.0
            for theta in np.arange(0.0, math.pi, 1e-3):
                worst = max(worst, *conservation_residual(cfg, theta, recoil(cfg, theta)))
            assert worst < 1e-12

    def test_random_angles(self):
        rng = np.random.default_rng(7)
        cfg = make_config(ANGSTROM)
        for theta in rng.uniform(0, math.pi, 100):
            e_res, p_res = conservation_residual(cfg, theta, recoil(cfg, theta))
            assert e_res < 1e-12 and p_res < 1e-12

    def test_detects_momentum_violation(self):
        cfg = make_config(ANGSTROM)
        r = recoil(cfg, math.pi / 2)
        bad = RecoilResult(1.01 * r.p_m, r.theta_m, r.E_m, r.photon_out)
        _, p_res = conservation_residual(cfg, math.pi / 2, bad)
        # 1% of p_m, relative to the incident momentum
        assert p_res == pytest.approx(0.01 * r.p_m / (cfg.constants.h / ANGSTROM), rel=1e-6)
        assert 5e-3 < p_res < 3e-2

    @given(st.floats(1e-3, math.pi - 1e-3), st.sampled_from([1e-10, 1e-11, 3e-12]))
    def test_recoil_angle_closed_form(self, theta, lambda0):
        cfg = make_config(lambda0)
        r = recoil(cfg, theta)
        expected = math.atan2(1.0, (1 + cfg.epsilon) * math.tan(theta / 2))
        assert r.theta_m == pytest.approx(expected, rel=1e-9)
