import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from degenpair import (
    EnergyRef,
    GaussianProfile,
    GridSpec,
    LorentzSqrtProfile,
    PairConfig,
    ParameterDomainError,
    SechPowerProfile,
    UnsupportedLimitError,
    build_pair,
    gamma_zero_potential,
    koley_kar_pair,
    koley_kar_potential,
    phase,
    potential_function,
)
from degenpair.construct import koley_kar_a2, lorentz_v_minus_e, v_minus_e
from degenpair.profiles import phase_quadrature


class TestPhase:
    def test_lorentz_closed_form_and_quadrature(self):
        p = LorentzSqrtProfile(1.0)
        assert phase(p, PairConfig(1.0), 1.0) == pytest.approx(4 / 3, rel=1e-15)
        assert phase_quadrature(p, 1.0, 1.0, tol=1e-12) == pytest.approx(4 / 3, abs=1e-12)

    def test_sech_quarter_period(self):
        x = math.asinh(6 * math.pi)
        p = SechPowerProfile(1.0)
        assert phase(p, PairConfig(1 / 12), x) == pytest.approx(math.pi / 2, rel=1e-14)
        assert phase_quadrature(p, 1 / 12, x) == pytest.approx(math.pi / 2, abs=1e-12)

    @pytest.mark.parametrize("profile", [LorentzSqrtProfile(2.0), SechPowerProfile(0.7), GaussianProfile(0.5)], ids=repr)
    def test_zero_at_origin_and_odd(self, profile):
        cfg = PairConfig(0.3)
        assert phase(profile, cfg, 0.0) == 0.0
        x = np.linspace(0.1, 3.0, 7)
        np.testing.assert_array_equal(phase(profile, cfg, -x), -phase(profile, cfg, x))

    def test_quadrature_family_without_closed_form(self):
        p = SechPowerProfile(3.0)
        x = np.array([-2.0, 0.0, 0.5, 2.0])
        ref = [0.5 * integrate.quad(lambda t: math.cosh(t) ** 3, 0, v, epsabs=1e-14)[0] for v in x]
        np.testing.assert_allclose(phase(p, PairConfig(0.5), x), ref, atol=1e-12)


class TestPairConfig:
    def test_defaults(self):
        cfg = PairConfig(1.0)
        assert cfg.b_coeff == 1.0
        assert cfg.energy_ref is EnergyRef.ZERO_AT_ORIGIN

    @pytest.mark.parametrize("kwargs", [{"gamma": -1.0}, {"gamma": 1.0, "b_coeff": 0.0}, {"gamma": float("inf")}])
    def test_rejects(self, kwargs):
        with pytest.raises(ParameterDomainError):
            PairConfig(**kwargs)

    def test_energy_ref_from_string(self):
        assert PairConfig(1.0, energy_ref="as-given").energy_ref is EnergyRef.AS_GIVEN


class TestGrid:
    def test_symmetric_with_exact_zero(self):
        x = GridSpec(8.0, 4001).grid()
        assert x[2000] == 0.0
        np.testing.assert_array_equal(x, -x[::-1])

    @pytest.mark.parametrize("n", [2, 4000, 1, 3.5])
    def test_rejects_even_or_tiny(self, n):
        with pytest.raises(ParameterDomainError):
            GridSpec(1.0, n)

    def test_rejects_nonpositive_extent(self):
        with pytest.raises(ParameterDomainError):
            GridSpec(0.0, 11)


class TestBuildPair:
    def test_lorentz_energy(self, lorentz_pair):
        assert lorentz_pair.energy == 2.0
        # direct evaluation of V - E at the origin
        assert lorentz_v_minus_e(0.0, 1.0, 1.0) == -2.0
        centre = lorentz_pair.grid.size // 2
        assert lorentz_pair.potential[centre] == 0.0

    def test_lorentz_potential_matches_explicit_formula(self, lorentz_pair):
        np.testing.assert_allclose(lorentz_pair.v_minus_e, lorentz_v_minus_e(lorentz_pair.grid, 1.0, 1.0), rtol=1e-13, atol=1e-13)

    def test_sech_as_given_reproduces_koley_kar(self):
        a1 = 1 / 144
        pair = build_pair(SechPowerProfile(1.0), PairConfig(math.sqrt(a1), energy_ref="as-given"), (6.0, 601))
        assert pair.energy == -0.25
        np.testing.assert_allclose(pair.potential, koley_kar_potential(1.0, a1)(pair.grid), rtol=1e-12)

    def test_koley_kar_residual_at_sample_points(self):
        # substitute the closed forms into psi'' = (V - E) psi with finite differences
        a1 = 1 / 144
        V = koley_kar_potential(1.0, a1)
        E = -0.25
        h = 1e-4
        for x in np.linspace(-4, 4, 20):
            psi = lambda t: math.cos(math.sqrt(a1) * math.sinh(t)) / math.sqrt(math.cosh(t))
            d2 = (psi(x + h) - 2 * psi(x) + psi(x - h)) / h**2
            assert d2 == pytest.approx((float(V(x)) - E) * psi(x), abs=1e-6)

    def test_gamma_zero_drops_odd_state(self):
        p = LorentzSqrtProfile(1.5)
        pair = build_pair(p, PairConfig(0.0), (5.0, 101))
        assert np.all(pair.psi_minus == 0.0)
        np.testing.assert_array_equal(pair.psi_plus, pair.profile.f(pair.grid))
        assert pair.wronskian_const == 0.0

    def test_psi_values_follow_ansatz(self, lorentz_pair):
        g = lorentz_pair.grid**3 / 3 + lorentz_pair.grid
        f = 1 / np.sqrt(1 + lorentz_pair.grid**2)
        np.testing.assert_allclose(lorentz_pair.psi_plus, f * np.cos(g), atol=1e-13)
        np.testing.assert_allclose(lorentz_pair.psi_minus, f * np.sin(g), atol=1e-13)

    def test_b_scales_odd_state_and_wronskian(self):
        p = LorentzSqrtProfile(1.0)
        one = build_pair(p, PairConfig(0.7), (3.0, 61))
        three = build_pair(p, PairConfig(0.7, b_coeff=-3.0), (3.0, 61))
        np.testing.assert_allclose(three.psi_minus, -3.0 * one.psi_minus)
        assert three.wronskian_const == pytest.approx(3.0 * 0.7)

    def test_rejects_grid_beyond_tabulated_domain(self):
        from degenpair import TabulatedProfile

        x = np.linspace(-2, 2, 41)
        p = TabulatedProfile(x, np.exp(-x * x))
        with pytest.raises(ParameterDomainError):
            build_pair(p, PairConfig(0.1), (3.0, 11))

    def test_evaluate_between_samples(self, kk_pair):
        x = 1.23456
        g = math.sinh(x) / 12
        f = 1 / math.sqrt(math.cosh(x))
        assert kk_pair.evaluate("plus", x) == pytest.approx(f * math.cos(g), rel=1e-14)
        assert kk_pair.evaluate("minus", x) == pytest.approx(f * math.sin(g), rel=1e-14)

    def test_evaluate_quadrature_family(self):
        pair = build_pair(SechPowerProfile(0.6), PairConfig(0.4), (4.0, 401))
        x = 2.3456
        g = 0.4 * integrate.quad(lambda t: math.cosh(t) ** 0.6, 0, x, epsabs=1e-14)[0]
        assert pair.phase_at(x) == pytest.approx(g, abs=1e-12)


class TestKoleyKar:
    def test_default_origin_potential(self):
        pair = koley_kar_pair(1.0, 1 / 144, (6.0, 2001))
        centre = pair.grid.size // 2
        assert pair.potential[centre] == pytest.approx(-109 / 144, rel=1e-15)
        assert pair.energy == -0.25
        assert pair.psi_plus[centre] == 1.0
        assert pair.psi_minus[centre] == 0.0

    def test_a2(self):
        assert koley_kar_a2(2.0) == 2.0
        assert koley_kar_a2(1.0) == 0.75

    @pytest.mark.parametrize("nu", [0.5, 1.0, 2.0, 3.0])
    def test_energy_minus_nu_sq_over_four(self, nu):
        pair = koley_kar_pair(nu, 0.01, (4.0, 801))
        assert pair.energy == -0.25 * nu**2
        # literal potential equals f''/f - gamma**2/f**4 + E
        np.testing.assert_allclose(pair.v_minus_e, v_minus_e(pair.profile, 0.1, pair.grid), rtol=1e-10, atol=1e-10)

    def test_rejects_nonpositive(self):
        with pytest.raises(ParameterDomainError):
            koley_kar_pair(1.0, 0.0, (4.0, 11))
        with pytest.raises(ParameterDomainError):
            koley_kar_pair(-1.0, 0.1, (4.0, 11))


class TestGammaZeroPotential:
    def test_lorentz_volcano(self):
        x, v = gamma_zero_potential(LorentzSqrtProfile(1.0), (10.0, 2001))
        np.testing.assert_allclose(v, (2 * x**2 - 1) / (x**2 + 1) ** 2, atol=1e-15)
        assert v[1000] == -1.0
        _, far = gamma_zero_potential(LorentzSqrtProfile(1.0), (1e6, 3))
        assert abs(far[0]) < 1e-11

    def test_profile_is_zero_energy_state(self):
        p = LorentzSqrtProfile(1.0)
        x, v = gamma_zero_potential(p, (6.0, 601))
        f, _, d2f = p.eval(x)
        assert np.max(np.abs(d2f + (0.0 - v) * f)) < 1e-15

    def test_sech_shifted_by_asymptote(self):
        x, v = gamma_zero_potential(SechPowerProfile(1.0), (6.0, 601))
        np.testing.assert_allclose(v, -0.75 / np.cosh(x) ** 2, atol=1e-14)
        # finite-difference oracle for f''/f
        f = SechPowerProfile(1.0).f
        h = 1e-4
        fd = (f(x + h) - 2 * f(x) + f(x - h)) / h**2 / f(x) - 0.25
        np.testing.assert_allclose(v, fd, atol=1e-6)

    def test_gaussian_rejected(self):
        with pytest.raises(UnsupportedLimitError):
            gamma_zero_potential(GaussianProfile(1.0), (3.0, 11))


class TestProperties:
    @settings(max_examples=30, deadline=None)
    @given(a=st.floats(0.3, 3.0), gamma=st.floats(0.0, 2.0), b=st.floats(0.2, 5.0))
    def test_parity_exact_on_symmetric_grid(self, a, gamma, b):
        pair = build_pair(LorentzSqrtProfile(a), PairConfig(gamma, b), (4.0, 201))
        np.testing.assert_array_equal(pair.psi_plus, pair.psi_plus[::-1])
        np.testing.assert_array_equal(pair.psi_minus, -pair.psi_minus[::-1])

    @pytest.mark.parametrize(
        "profile, onset",
        [(LorentzSqrtProfile(1.0), 2.0), (SechPowerProfile(1.0), 1.0), (GaussianProfile(1.0), 1.0)],
        ids=repr,
    )
    def test_potential_unbounded_below(self, profile, onset):
        potential, _ = potential_function(profile, PairConfig(0.5))
        for x_max in (onset, 2 * onset, 3 * onset):
            assert potential(x_max) < potential(x_max / 2)

    @pytest.mark.parametrize("profile", [LorentzSqrtProfile(1.0), SechPowerProfile(1.0)], ids=repr)
    def test_odd_state_is_first_order_in_gamma(self, profile):
        X = 2.0
        x = np.linspace(-X, X, 2001)
        limit = np.max(profile.f(x) * np.abs(phase(profile, PairConfig(1.0), x)))
        ratios = []
        for gamma in (1e-2, 1e-3, 1e-4):
            pair = build_pair(profile, PairConfig(gamma, b_coeff=2.5), (X, 2001))
            ratios.append(np.max(np.abs(pair.psi_minus)) / (2.5 * gamma))
        assert ratios == pytest.approx([limit] * 3, rel=1e-2)
        assert ratios[2] == pytest.approx(ratios[1], rel=1e-2)
