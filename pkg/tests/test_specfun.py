"""Special functions against their defining integrals and identities.

Expected values are frozen from the adaptive quadrature oracle in this
package (cross-checked during development against 40-digit arithmetic);
the closed forms must reproduce them independently.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from irslab.errors import ConvergenceError, DomainError
from irslab.specfun import (QuadratureSpec, adaptive_quadrature, bessel_k,
                            log_bessel_k, log_scaled_upper_gamma,
                            upper_incomplete_gamma)

# oracle anchors (quadrature of the defining integrals, rel tol 1e-12)
K0_AT_1 = 0.42102443824070834          # int_0^inf exp(-cosh t) dt
GAMMA_0_1 = 0.21938393439552029        # int_1^inf e^-t / t dt
GAMMA_M1_1 = 0.14849550677592205       # int_1^inf e^-t / t^2 dt
S_M1_1 = 0.40365263767680676           # e * Gamma(-1, 1)


class TestAdaptiveQuadrature:
    def test_spec_validation(self):
        with pytest.raises(DomainError):
            QuadratureSpec(rel_tol=0.0)
        with pytest.raises(DomainError):
            QuadratureSpec(abs_tol=-1.0)
        with pytest.raises(DomainError):
            QuadratureSpec(max_subdivisions=0)
        spec = QuadratureSpec()
        assert spec.rel_tol > 0 and spec.abs_tol > 0 and spec.max_subdivisions >= 1

    def test_unit_exponential_mass(self):
        got = adaptive_quadrature(lambda x: math.exp(-x))
        assert abs(got - 1.0) < 1e-10

    def test_half_gaussian(self):
        got = adaptive_quadrature(lambda x: math.exp(-x * x))
        assert abs(got - math.sqrt(math.pi) / 2.0) < 1e-10

    def test_shrink_weight_integral(self):
        """The integral behind the M1 = 1 shrink weight hits the gamma form."""
        got = adaptive_quadrature(
            lambda a: 2.0 * a * math.exp(-a * a) * a * a / (a * a + 1.0))
        assert abs(got - S_M1_1) < 1e-10
        assert abs(got - math.exp(log_scaled_upper_gamma(-1.0, 1.0))) < 1e-10

    def test_budget_exhaustion_raises_with_estimate(self):
        spec = QuadratureSpec(rel_tol=1e-15, abs_tol=1e-300, max_subdivisions=1)
        with pytest.raises(ConvergenceError) as err:
            adaptive_quadrature(lambda x: math.exp(-x) * math.cos(40.0 * x), spec)
        assert err.value.estimate is not None
        assert err.value.error_bound is not None

    def test_non_finite_integrand_rejected(self):
        with pytest.raises(DomainError):
            adaptive_quadrature(lambda x: float("nan"))

    def test_tight_tolerance_on_smooth_integrand(self):
        spec = QuadratureSpec(rel_tol=1e-13)
        got = adaptive_quadrature(lambda x: x * math.exp(-x), spec)
        assert abs(got - 1.0) < 1e-12


class TestBesselK:
    def test_frozen_anchor(self):
        assert bessel_k(0.0, 1.0) == pytest.approx(K0_AT_1, rel=1e-10)

    def test_half_order_closed_form(self):
        # K_{1/2}(x) = sqrt(pi / (2 x)) e^-x
        for x in (0.5, 2.0, 10.0):
            want = math.sqrt(math.pi / (2.0 * x)) * math.exp(-x)
            assert bessel_k(0.5, x) == pytest.approx(want, rel=1e-12)

    def test_order_symmetry_is_exact(self):
        for nu in (0.3, 1.0, 2.5, 8.0):
            for x in (0.05, 1.0, 50.0):
                assert bessel_k(-nu, x) == bessel_k(nu, x)
                assert log_bessel_k(-nu, x) == log_bessel_k(nu, x)

    def test_recurrence(self):
        for nu in (1.0, 3.5, 6.0):
            for x in (0.2, 1.0, 15.0):
                lhs = bessel_k(nu + 1.0, x)
                rhs = bessel_k(nu - 1.0, x) + (2.0 * nu / x) * bessel_k(nu, x)
                assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_quadrature_oracle(self):
        # K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt
        for nu, x in ((0.0, 1.0), (1.0, 0.3), (2.0, 5.0)):
            oracle = adaptive_quadrature(
                lambda t, nu=nu, x=x: 0.0 if t > 30.0
                else math.exp(-x * math.cosh(t)) * math.cosh(nu * t))
            assert bessel_k(nu, x) == pytest.approx(oracle, rel=1e-10)

    def test_domain_errors(self):
        for bad in (0.0, -1.0, float("nan"), float("inf")):
            with pytest.raises(DomainError):
                bessel_k(1.0, bad)
        with pytest.raises(DomainError):
            bessel_k(float("inf"), 1.0)
        with pytest.raises(DomainError):
            log_bessel_k(1.0, -2.0)

    def test_array_input(self):
        x = np.array([0.5, 1.0, 2.0])
        got = bessel_k(1.0, x)
        assert got.shape == (3,)
        assert got[1] == pytest.approx(bessel_k(1.0, 1.0), rel=1e-14)


class TestLogBesselK:
    def test_matches_linear_form_in_overlap(self):
        for nu in (0.0, 0.5, 3.0, 9.0):
            for x in (0.01, 1.0, 30.0, 300.0):
                assert math.exp(log_bessel_k(nu, x)) == pytest.approx(
                    bessel_k(nu, x), rel=1e-12)

    def test_survives_underflow_region(self):
        # K_3(800) ~ 1e-350 underflows; the log form stays finite and obeys
        # the recurrence evaluated in log space
        val = log_bessel_k(3.0, 800.0)
        assert math.isfinite(val) and val < -700.0
        hi = log_bessel_k(2.0, 800.0)
        r = (math.exp(log_bessel_k(0.0, 800.0) - hi)
             + (2.0 / 800.0) * math.exp(log_bessel_k(1.0, 800.0) - hi))
        assert abs(r - 1.0) < 1e-10

    def test_huge_argument_asymptotic_region(self):
        # scaled evaluation breaks past ~1e10; the asymptotic branch takes
        # over and must join smoothly: ln K ~ 0.5 ln(pi/2x) - x
        for x in (1e11, 1e15):
            got = log_bessel_k(2.0, x)
            want = 0.5 * math.log(math.pi / (2.0 * x)) - x
            assert got == pytest.approx(want, rel=1e-12)

    def test_high_order_tiny_argument(self):
        # pinned during development against the small-argument series
        # K_nu(x) ~ (1/2) Gamma(nu) (2/x)^nu evaluated at high precision
        assert log_bessel_k(63.0, 1e-5) == pytest.approx(965.1556111607306, rel=1e-12)
        # one decade in x moves ln K by nu * ln 10 at leading order
        step = log_bessel_k(63.0, 1e-6) - log_bessel_k(63.0, 1e-5)
        assert step == pytest.approx(63.0 * math.log(10.0), rel=1e-9)


class TestUpperIncompleteGamma:
    def test_positive_integer_orders(self):
        # Gamma(1, z) = e^-z, Gamma(2, z) = (z + 1) e^-z
        for z in (0.3, 1.0, 8.0):
            assert upper_incomplete_gamma(1.0, z) == pytest.approx(
                math.exp(-z), rel=1e-13)
            assert upper_incomplete_gamma(2.0, z) == pytest.approx(
                (z + 1.0) * math.exp(-z), rel=1e-13)

    def test_frozen_anchors(self):
        assert upper_incomplete_gamma(0.0, 1.0) == pytest.approx(GAMMA_0_1, rel=1e-12)
        assert upper_incomplete_gamma(-1.0, 1.0) == pytest.approx(GAMMA_M1_1, rel=1e-12)

    def test_negative_order_via_recurrence_identity(self):
        # Gamma(0, 1) = -Gamma(-1, 1) + e^-1 rearranged
        got = upper_incomplete_gamma(-1.0, 1.0)
        want = math.exp(-1.0) - upper_incomplete_gamma(0.0, 1.0)
        assert got == pytest.approx(want, rel=1e-12)

    def test_quadrature_oracle_grid(self):
        for a in (-5.0, -2.5, -1.0, 0.5, 3.0):
            for z in (0.2, 1.0, 6.0):
                oracle = adaptive_quadrature(
                    lambda s, a=a, z=z: (z + s) ** (a - 1.0) * math.exp(-(z + s)))
                assert upper_incomplete_gamma(a, z) == pytest.approx(oracle, rel=1e-9)

    def test_domain_errors(self):
        for bad in (0.0, -1.0, float("nan"), float("inf")):
            with pytest.raises(DomainError):
                upper_incomplete_gamma(1.0, bad)
        with pytest.raises(DomainError):
            upper_incomplete_gamma(float("nan"), 1.0)


class TestLogScaledUpperGamma:
    def test_matches_unscaled_in_overlap(self):
        for a in (-6.0, -1.5, 0.0, 2.0):
            for z in (0.4, 1.0, 20.0):
                want = math.log(upper_incomplete_gamma(a, z)) - a * math.log(z) + z
                assert log_scaled_upper_gamma(a, z) == pytest.approx(want, rel=1e-10)

    def test_extreme_argument_stays_finite(self):
        # the regime of deep path loss: z = sigma^2 / c up to 1e18
        got = log_scaled_upper_gamma(-10.0, 1e18)
        assert got == pytest.approx(-math.log(1e18), rel=1e-10)
        assert math.isfinite(log_scaled_upper_gamma(-1e4, 5.0))

    def test_frozen_anchor(self):
        assert log_scaled_upper_gamma(-1.0, 1.0) == pytest.approx(
            math.log(S_M1_1), rel=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(a=st.floats(-20.0, 3.0), z=st.floats(0.01, 100.0))
    def test_recurrence_property(self, a, z):
        """z S(a+1, z) - a S(a, z) = 1 for every order and argument."""
        s_a = math.exp(log_scaled_upper_gamma(a, z))
        s_a1 = math.exp(log_scaled_upper_gamma(a + 1.0, z))
        resid = abs(z * s_a1 - a * s_a - 1.0)
        assert resid <= 1e-10 * (1.0 + abs(a * s_a) + z * s_a1)
