"""Numerical cross-check suite behind ``irslab validate``.

Every closed form in the package is re-derived here by an independent
route (quadrature of a defining integral, a recurrence, a distributional
limit, or a two-sampler comparison) and reduced to one named check with
an achieved error and a tolerance.  The test suite runs the same checks;
the CLI prints them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import j0 as _bessel_j0

from . import stats
from .channel import SystemConfig, make_profile, rng_stream, synthesize_channel, synthesize_gsm
from .errors import IrsLabError
from .estimator import mmse_weight, mse_bounds
from .specfun import (QuadratureSpec, adaptive_quadrature, bessel_k,
                      log_bessel_k, upper_incomplete_gamma)

__all__ = ["ValidationResult", "run_validation"]


@dataclass(frozen=True)
class ValidationResult:
    name: str
    achieved: float
    tolerance: float
    passed: bool


def _result(name: str, achieved: float, tolerance: float) -> ValidationResult:
    return ValidationResult(name=name, achieved=float(achieved),
                            tolerance=float(tolerance),
                            passed=bool(achieved <= tolerance))


def _rel(got: float, want: float) -> float:
    return abs(got - want) / max(abs(want), 1e-300)


def _check_bessel_oracle(fast: bool) -> ValidationResult:
    # K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt
    orders = (0.0, 1.0, 5.0) if fast else (0.0, 0.5, 1.0, 2.0, 5.0)
    xs = (0.5, 3.0) if fast else (0.1, 1.0, 10.0)
    worst = 0.0
    for nu in orders:
        for x in xs:
            def integrand(t, nu=nu, x=x):
                if t > 30.0:  # x cosh t > 5e11 here: zero to double precision
                    return 0.0
                return math.exp(-x * math.cosh(t)) * math.cosh(nu * t)
            oracle = adaptive_quadrature(integrand)
            worst = max(worst, _rel(bessel_k(nu, x), oracle))
    return _result("bessel_quadrature_agreement", worst, 1e-8)


def _check_bessel_symmetry() -> ValidationResult:
    worst = 0.0
    for nu in (0.5, 1.0, 3.0, 7.5):
        for x in (0.2, 1.0, 40.0):
            worst = max(worst, _rel(bessel_k(-nu, x), bessel_k(nu, x)))
            worst = max(worst, abs(log_bessel_k(-nu, x) - log_bessel_k(nu, x)))
    return _result("bessel_order_symmetry", worst, 1e-15)


def _check_bessel_recurrence() -> ValidationResult:
    # K_{nu+1}(x) = K_{nu-1}(x) + (2 nu / x) K_nu(x)
    worst = 0.0
    for nu in (1.0, 2.5, 5.0):
        for x in (0.5, 2.0, 20.0, 100.0):
            lhs = bessel_k(nu + 1.0, x)
            rhs = bessel_k(nu - 1.0, x) + (2.0 * nu / x) * bessel_k(nu, x)
            worst = max(worst, _rel(lhs, rhs))
    return _result("bessel_recurrence", worst, 1e-12)


def _check_log_bessel() -> ValidationResult:
    worst = 0.0
    for nu in (0.0, 0.5, 2.0, 9.0):
        for x in (0.05, 1.0, 30.0):
            worst = max(worst, _rel(math.exp(log_bessel_k(nu, x)), bessel_k(nu, x)))
    # log-domain recurrence where the linear form underflows (x = 800)
    for nu, x in ((1.0, 800.0), (4.0, 800.0)):
        hi = log_bessel_k(nu + 1.0, x)
        r = (math.exp(log_bessel_k(nu - 1.0, x) - hi)
             + (2.0 * nu / x) * math.exp(log_bessel_k(nu, x) - hi))
        worst = max(worst, abs(r - 1.0))
    return _result("log_bessel_consistency", worst, 1e-10)


def _check_gamma_oracle(fast: bool) -> ValidationResult:
    # Gamma(a, z) = int_0^inf (z + s)^(a-1) exp(-(z + s)) ds
    orders = (-8.0, -1.0, 0.5, 2.0) if fast else (
        -8.0, -3.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 5.0)
    zs = (0.5, 5.0) if fast else (0.1, 0.5, 1.0, 2.0, 10.0, 50.0)
    worst = 0.0
    for a in orders:
        for z in zs:
            oracle = adaptive_quadrature(
                lambda s, a=a, z=z: (z + s) ** (a - 1.0) * math.exp(-(z + s))
            )
            worst = max(worst, _rel(upper_incomplete_gamma(a, z), oracle))
    return _result("gamma_quadrature_agreement", worst, 1e-8)


def _check_gamma_recurrence() -> ValidationResult:
    # Gamma(a+1, z) = a Gamma(a, z) + z^a e^-z, i.e. z S(a+1, z) = a S(a, z) + 1
    from .specfun import log_scaled_upper_gamma
    worst = 0.0
    for a in np.arange(-20.0, 4.1, 1.5):
        for z in (0.3, 1.0, 7.0, 300.0):
            s_a = math.exp(log_scaled_upper_gamma(float(a), z))
            s_a1 = math.exp(log_scaled_upper_gamma(float(a) + 1.0, z))
            resid = abs(z * s_a1 - float(a) * s_a - 1.0)
            worst = max(worst, resid / (1.0 + abs(float(a) * s_a) + z * s_a1))
    return _result("gamma_recurrence", worst, 1e-12)


def _weight_oracle(m1: int, z: float) -> float:
    spec = QuadratureSpec(rel_tol=1e-12)
    return adaptive_quadrature(
        lambda a: (a * a / (a * a + z)) * math.exp(stats.log_pdf_scale(m1, a)),
        spec,
    )


def _check_weight_identity(fast: bool) -> ValidationResult:
    m1s = (1, 4, 16) if fast else tuple(range(1, 21))
    zs = (0.1, 1.0, 1e3) if fast else (1e-3, 0.1, 1.0, 10.0, 1e3, 1e6)
    worst = 0.0
    for m1 in m1s:
        for z in zs:
            got = mmse_weight(m1, 1.0, z)
            worst = max(worst, _rel(got, _weight_oracle(m1, z)))
    return _result("weight_identity", worst, 1e-8)


def _check_weight_shape() -> ValidationResult:
    # inside (0, 1); decreasing in noise; below the second-moment weight,
    # approaching it as M1 grows (ratio >= 0.98 from M1 = 8 at z = 1)
    excess = 0.0
    for m1 in (1, 2, 4, 8, 16, 32):
        prev = 1.0
        for z in (1e-3, 0.1, 1.0, 10.0, 1e3):
            w = mmse_weight(m1, 1.0, z)
            excess = max(excess, -w, w - 1.0, w - prev)
            prev = w
            jensen = m1 / (m1 + z)
            excess = max(excess, w - jensen)
        if m1 >= 8:
            w1 = mmse_weight(m1, 1.0, 1.0)
            excess = max(excess, 0.98 - w1 / (m1 / (m1 + 1.0)))
    return _result("weight_shape", excess, 1e-12)


def _check_entry_normalization(fast: bool) -> ValidationResult:
    pairs = ((1, 1.0), (5, 4.0)) if fast else tuple(
        (m1, c) for m1 in (1, 2, 5) for c in (0.25, 1.0, 4.0))
    spec = QuadratureSpec(rel_tol=1e-9)
    worst = 0.0
    for m1, c in pairs:
        dist = stats.BesselKChannelDist(num_irs_elements=m1, channel_scale=c)
        total = adaptive_quadrature(
            lambda r: math.exp(stats.log_radial_density(dist, r)), spec)
        worst = max(worst, abs(total - 1.0))
    return _result("entry_density_normalization", worst, 1e-6)


def _check_row_normalization() -> ValidationResult:
    spec = QuadratureSpec(rel_tol=1e-9)
    worst = 0.0
    for m1, m in ((2, 1), (4, 2), (2, 4)):
        dist = stats.BesselKChannelDist(num_irs_elements=m1, channel_scale=1.0,
                                        num_bs_antennas=m)
        total = adaptive_quadrature(
            lambda r: math.exp(stats.log_radial_density(dist, r)), spec)
        worst = max(worst, abs(total - 1.0))
    return _result("row_density_normalization", worst, 1e-6)


def _check_scale_density() -> ValidationResult:
    spec = QuadratureSpec(rel_tol=1e-11)
    worst = 0.0
    for m1 in (1, 5, 20):
        mass = adaptive_quadrature(
            lambda a: math.exp(stats.log_pdf_scale(m1, a)), spec)
        second = adaptive_quadrature(
            lambda a: a * a * math.exp(stats.log_pdf_scale(m1, a)), spec)
        worst = max(worst, abs(mass - 1.0), _rel(second, float(m1)))
    return _result("scale_density_moments", worst, 1e-9)


def _check_charfun_inversion(fast: bool) -> ValidationResult:
    # the entry density is the radial Fourier inverse of the characteristic
    # function: p(r) = (1/2pi) int_0^inf t J0(r t) phi(t) dt
    cases = ((2, 1.0),) if fast else ((2, 1.0), (3, 0.5))
    radii = (1.0,) if fast else (0.5, 1.0, 2.0)
    spec = QuadratureSpec(rel_tol=1e-9, abs_tol=1e-13, max_subdivisions=8000)
    worst = 0.0
    for m1, c in cases:
        dist = stats.BesselKChannelDist(num_irs_elements=m1, channel_scale=c)
        for r in radii:
            inv = adaptive_quadrature(
                lambda t: t * _bessel_j0(r * t) * stats.charfun(dist, t, 0.0)
                / (2.0 * math.pi),
                spec,
            )
            worst = max(worst, _rel(inv, math.exp(stats.log_pdf_entry(dist, r, 0.0))))
    return _result("charfun_inversion", worst, 1e-5)


def _check_radial_cdf_mass() -> ValidationResult:
    worst = 0.0
    for dist, kind in (
        (stats.BesselKChannelDist(num_irs_elements=2, channel_scale=1.0), "entry"),
        (stats.BesselKChannelDist(num_irs_elements=4, channel_scale=2.0,
                                  num_bs_antennas=3), "row"),
    ):
        cdf = stats.RadialCdf(dist, kind=kind)
        worst = max(worst, abs(cdf.total_mass - 1.0))
    return _result("radial_cdf_mass", worst, 1e-6)


def _check_gaussian_limit() -> ValidationResult:
    # with many elements the mixture contracts to a complex Gaussian: at
    # M1 = 64 (unit total variance) the radial CDFs differ below 0.01
    m1 = 64
    dist = stats.BesselKChannelDist(num_irs_elements=m1, channel_scale=1.0 / m1)
    cdf = stats.RadialCdf(dist, kind="entry")
    grid = np.linspace(1e-3, 4.0, 800)
    gap = np.max(np.abs(cdf(grid) - stats.gaussian_radial_cdf(grid, 1.0)))
    return _result("gaussian_limit", gap, 0.01)


def _check_sampler_agreement(fast: bool) -> ValidationResult:
    # the product construction and the direct mixture sampler draw the same
    # law: two-sample KS on |g| plus one-sample KS against the radial CDF
    from scipy.stats import ks_2samp, kstest
    n = 4000 if fast else 20000
    cfg = SystemConfig(num_bs_antennas=1, num_irs_elements=3, num_users=1,
                       normalized_units=True, snr_db=0.0, master_seed=1021)
    profile = make_profile(cfg, None)
    prod = np.empty(n, dtype=complex)
    gsm = np.empty(n, dtype=complex)
    for t in range(n):
        prod[t] = synthesize_channel(cfg, profile, rng_stream(1021, 0, t, 1)).cascaded[0, 0]
        gsm[t] = synthesize_gsm(cfg, profile, rng_stream(1021, 1, t, 1)).cascaded[0, 0]
    two = ks_2samp(np.abs(prod), np.abs(gsm), method="asymp").statistic
    crit_two = 1.628 * math.sqrt(2.0 / n)

    dist = stats.BesselKChannelDist(num_irs_elements=3, channel_scale=1.0)
    cdf = stats.RadialCdf(dist, kind="entry")
    one = kstest(np.abs(gsm), cdf).statistic
    crit_one = 1.628 / math.sqrt(n)
    # report the worst margin relative to the 1% critical values
    achieved = max(two / crit_two, one / crit_one)
    return _result("sampler_agreement", achieved, 1.0)


def _check_bounds_order() -> ValidationResult:
    # lower <= upper per user and in aggregate; in the deep-noise physical
    # regime the two coincide to double resolution, so the comparison is
    # relative to the upper bound
    excess = 0.0
    for cfg in (
        SystemConfig(),  # physical default
        SystemConfig(normalized_units=True, num_irs_elements=4),
    ):
        profile = make_profile(cfg, rng_stream(cfg.master_seed, 0, 0, 0))
        b = mse_bounds(profile, cfg.scattering_amplitude, cfg.num_irs_elements,
                       cfg.sigma2)
        excess = max(excess, (b.aggregate_lower - b.aggregate_upper) / b.aggregate_upper)
        excess = max(excess, float(np.max(
            (b.per_user_lower - b.per_user_upper) / b.per_user_upper)))
        if b.aggregate_upper <= 0.0:
            excess = max(excess, 1.0)
        if b.aggregate_asymptotic != b.aggregate_upper:
            excess = max(excess, 1.0)
    return _result("bounds_order", excess, 1e-9)


def run_validation(fast: bool = False) -> list[ValidationResult]:
    """Run every cross-check; ``fast`` shrinks the grids and sample sizes."""
    checks = [
        lambda: _check_bessel_oracle(fast),
        _check_bessel_symmetry,
        _check_bessel_recurrence,
        _check_log_bessel,
        lambda: _check_gamma_oracle(fast),
        _check_gamma_recurrence,
        lambda: _check_weight_identity(fast),
        _check_weight_shape,
        lambda: _check_entry_normalization(fast),
        _check_row_normalization,
        _check_scale_density,
        lambda: _check_charfun_inversion(fast),
        _check_radial_cdf_mass,
        _check_gaussian_limit,
        lambda: _check_sampler_agreement(fast),
        _check_bounds_order,
    ]
    results = []
    for check in checks:
        try:
            results.append(check())
        except IrsLabError as exc:  # a failed check must not hide the rest
            results.append(ValidationResult(
                name=f"{getattr(check, '__name__', 'check')}_error: {exc}",
                achieved=float("inf"), tolerance=0.0, passed=False))
    return results
