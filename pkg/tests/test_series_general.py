import math
import random

import pytest

from nigcdf.result import DomainViolation, NigParams
from nigcdf.series_beta0 import B0Context, series_b0_positive, uniform_b0_large_alpha
from nigcdf.series_general import (
    GeneralContext,
    ck_coefficients,
    general_asymptotic_large_delta,
    general_asymptotic_large_xm,
    general_remainder_estimates,
    general_series_bessel_ak,
    general_series_hermite_beta,
    general_series_hermite_xmu,
    uniform_general_large_gamma,
)
from nigcdf.series_xmu import XmuContext, xmu_asymptotic_large_delta

from conftest import nig_args, nig_ref, rel_err

TABLE4_ROWS = [
    (0.5, 2, 1, 0.25, 3),
    (1 / 3, 5, -1, 0.25, 1),
    (4, 15, -6, 3.5, 10),
    (0.2, 1, 0.5, 0.1, 0.5),
    (2, 3, 2, 1, 2),
    (3, 5, 0.5, 1, 4),
]


def mk(x, a, b, mu, d):
    return GeneralContext.make(NigParams(a, b, mu, d), x)


class TestBesselAkSeries:
    @pytest.mark.parametrize("name", ["gen_ak_a", "gen_ak_b"])
    def test_against_oracle(self, frozen, name):
        args = nig_args(frozen, name)
        ev = general_series_bessel_ak(mk(*args))
        assert rel_err(ev.value, nig_ref(frozen, name)) < 5e-13

    def test_printed_a_k_forms(self):
        # A_0..A_2 match the printed binomial closed forms
        from nigcdf.kernels import bessel_k_sequence
        ctx = mk(0.7, 2.0, 0.8, 0.0, 1.5)
        u, z = ctx.u, ctx.z
        seq = bessel_k_sequence(3, z)
        K = seq.values
        printed = [
            -u * K[0] + K[1],
            3 * u * u * K[0] - u * (3 + u * u) * K[1] + K[2],
            -10 * u ** 3 * K[0] + 5 * u * u * (2 + u * u) * K[1]
            - u * (5 + u ** 4) * K[2] + K[3],
        ]
        for k, want in enumerate(printed):
            got = sum((-1) ** j * math.comb(2 * k + 1, j) * u ** j * K[abs(k + 1 - j)]
                      for j in range(2 * k + 2))
            assert rel_err(got, want) < 1e-13

    def test_beta_to_zero_reduces_to_positive_series(self):
        x, a, mu, d = 0.6, 2.0, 0.1, 1.5
        g = general_series_bessel_ak(mk(x, a, 1e-11, mu, d), 1e-14).value
        b = series_b0_positive(B0Context.make(a, d, x, mu), 1e-14).value
        assert rel_err(g, b) < 1e-9

    def test_center_rejected(self):
        with pytest.raises(DomainViolation):
            general_series_bessel_ak(mk(0.25, 2.0, 1.0, 0.25, 3.0))


class TestRemainderEstimates:
    def test_monotone_decreasing_in_n(self):
        ctx = mk(0.5, 2, 1, 0.25, 3)
        prev = None
        for n in (10, 11, 12):
            bound, a1, a2 = general_remainder_estimates(ctx, n)
            if prev is not None:
                assert bound < prev[0] and a1 < prev[1] and a2 < prev[2]
            prev = (bound, a1, a2)

    def test_bound_covers_true_remainder(self, frozen):
        # partial sums truncated at N differ from the oracle by less than
        # the integral bound (sharp per the comparison table)
        ctx = mk(0.5, 2, 1, 0.25, 3)
        bound, _, _ = general_remainder_estimates(ctx, 10)
        full = nig_ref(frozen, "gen_ak_a")
        partial = _partial_ak(ctx, 10)
        assert abs(full - partial) <= 2.0 * bound

    def test_all_nonnegative(self):
        for n in (5, 20):
            vals = general_remainder_estimates(mk(1 / 3, 5, -1, 0.25, 1), n)
            assert all(v >= 0.0 for v in vals)


def _partial_ak(ctx, n):
    from nigcdf.kernels import bessel_k_sequence
    seq = bessel_k_sequence(n + 2, ctx.z, scaled=True)
    efac = math.exp(ctx.delta * ctx.gamma + ctx.xm * ctx.beta - ctx.z)
    u = ctx.u
    s = 0.0
    fac2 = 1.0
    for k in range(n):
        ak = sum((-1) ** j * math.comb(2 * k + 1, j) * u ** j * seq.values[abs(k + 1 - j)]
                 for j in range(2 * k + 2))
        if k:
            fac2 *= 2 * k + 1
        s += ak / fac2 * (ctx.xm * ctx.xm * ctx.alpha / ctx.omega) ** k
    pref = ctx.xm * ctx.alpha * ctx.delta / (math.pi * ctx.omega) * efac
    return 0.5 + pref * s


class TestHermiteXmu:
    def test_against_oracle(self, frozen):
        args = nig_args(frozen, "gen_hx_a")
        ev = general_series_hermite_xmu(mk(*args))
        assert rel_err(ev.value, nig_ref(frozen, "gen_hx_a")) < 5e-13

    def test_center_returns_base(self):
        ev = general_series_hermite_xmu(mk(0.0, 2.0, 1.0, 0.0, 3.0))
        from nigcdf.series_xmu import xmu_auto
        base = xmu_auto(NigParams(2.0, 1.0, 0.0, 3.0))
        assert ev.value == base.value


class TestHermiteBeta:
    def test_against_oracle(self, frozen):
        args = nig_args(frozen, "gen_hb_a")
        ev = general_series_hermite_beta(mk(*args))
        assert rel_err(ev.value, nig_ref(frozen, "gen_hb_a")) < 5e-13

    def test_beta_zero_equals_symmetric(self):
        ev = general_series_hermite_beta(mk(1.0, 2.0, 0.0, 0.0, 2.0))
        base = series_b0_positive(B0Context.make(2.0, 2.0, 1.0, 0.0))
        assert rel_err(ev.value, base.value) < 1e-13

    def test_reflection_composition(self):
        for x, a, b, mu, d in [(1.0, 2.0, 0.4, 0.0, 2.0), (0.3, 1.0, 0.5, 0.0, 1.0)]:
            v1 = general_series_hermite_beta(mk(x, a, b, mu, d), 1e-14).value
            v2 = general_series_hermite_beta(mk(-x, a, -b, -mu, d), 1e-14).value
            assert abs(v1 + v2 - 1.0) < 1e-12


class TestAsymptoticDelta:
    def test_against_oracle(self, frozen):
        args = nig_args(frozen, "gen_ad_a")
        ev = general_asymptotic_large_delta(mk(*args))
        assert rel_err(ev.value, nig_ref(frozen, "gen_ad_a")) < 5e-12

    def test_center_reduces_to_xmu_form(self):
        # Q(., 0) = 1 collapses the series onto the centre-point expansion
        a, b, d = 20.0, 19.0, 20.0
        g = general_asymptotic_large_delta(mk(0.0, a, b, 0.0, d), 1e-13)
        x = xmu_asymptotic_large_delta(XmuContext.make(a, b, d), 1e-13)
        assert rel_err(g.value, x.value) < 1e-13

    def test_requires_positive_beta(self):
        with pytest.raises(DomainViolation):
            general_asymptotic_large_delta(mk(1.0, 10.0, -8.0, 0.5, 20.0))

    def test_negative_gamma_argument_path(self, frozen):
        # (x - mu) beta > 0 exercises the negative-argument recurrence
        ev = general_asymptotic_large_delta(mk(1.0, 10.0, 8.0, 0.5, 20.0))
        assert ev.value > 0


class TestAsymptoticXm:
    def test_against_oracle(self, frozen):
        args = nig_args(frozen, "gen_ax_a")
        ev = general_asymptotic_large_xm(mk(*args))
        assert rel_err(ev.value, nig_ref(frozen, "gen_ax_a")) < 5e-12

    def test_beta_zero_matches_b0_form(self):
        from nigcdf.series_beta0 import asymptotic_b0_large_xm
        x, a, mu, d = -9.0, 15.0, 1.0, 1.0
        g = general_asymptotic_large_xm(mk(x, a, 0.0, mu, d), 1e-13)
        b = asymptotic_b0_large_xm(B0Context.make(a, d, x, mu), 1e-13)
        assert rel_err(g.value, b.value) < 1e-13

    def test_requires_negative_xm(self):
        with pytest.raises(DomainViolation):
            general_asymptotic_large_xm(mk(10.0, 12.0, 1.0, 0.5, 2.0))


class TestCkCoefficients:
    def test_c0_is_phi(self):
        from nigcdf.kernels import std_normal_cdf
        a, b, r = 0.3, -0.7, 1.4
        ck = ck_coefficients(a, b, r, 4)
        assert ck.values[0] == pytest.approx(
            std_normal_cdf(a / math.sqrt(r) + b * math.sqrt(r)), rel=1e-15)

    def test_beta0_c1_closed_form(self):
        from nigcdf.kernels import std_normal_pdf
        a, r = 0.4, 1.3
        ck = ck_coefficients(a, 0.0, r, 3)
        want = -(a / (2.0 * r ** 1.5)) * std_normal_pdf(a / math.sqrt(r))
        assert ck.values[1] == pytest.approx(want, rel=1e-14)

    def test_recurrence_matches_taylor_oracle(self, frozen):
        want = eval(frozen["CK_a0.3_bm0.7_r1.4"])
        got = ck_coefficients(0.3, -0.7, 1.4, 10).values
        for g, w in zip(got, want):
            assert rel_err(g, float(w)) < 1e-10

    def test_general_agrees_with_simplified_at_b0(self):
        a, r = -1.2, 0.6
        gen = ck_coefficients(a, 1e-13, r, 8).values   # near-zero b via recurrence
        simp = ck_coefficients(a, 0.0, r, 8).values
        for g, s in zip(gen, simp):
            assert rel_err(g, s) < 1e-9

    def test_degenerate_centre_signal(self):
        with pytest.raises(DomainViolation):
            ck_coefficients(1.0, 2.0, 0.5, 5)   # a = b r exactly


class TestUniformGamma:
    def test_beta0_equals_b0_uniform(self):
        x, a, mu, d = 1.5, 31.0, 1.0, 30.0
        g = uniform_general_large_gamma(mk(x, a, 0.0, mu, d))
        b = uniform_b0_large_alpha(B0Context.make(a, d, x, mu))
        assert rel_err(g.value, b.value) < 1e-13

    def test_against_oracle(self, frozen):
        args = nig_args(frozen, "gen_ug_a")
        ev = uniform_general_large_gamma(mk(*args))
        assert rel_err(ev.value, nig_ref(frozen, "gen_ug_a")) < 5e-12


class TestInvariants:
    def test_reflection_composition_sampled(self):
        rng = random.Random(12)
        checked = 0
        for _ in range(200):
            a = 10 ** rng.uniform(-0.5, 1.2)
            b = rng.uniform(-0.9, 0.9) * a
            mu = rng.uniform(-2, 2)
            d = 10 ** rng.uniform(-0.5, 1.0)
            x = mu + rng.uniform(-1.4, 1.4)
            ctx = mk(x, a, b, mu, d)
            refl = mk(-x, a, -b, -mu, d)
            g = math.sqrt((a - b) * (a + b))
            if not ((abs(b) <= 1.0 and g >= 1.5) or (abs(b) <= 0.5 and g >= 0.75)):
                continue
            v1 = general_series_hermite_beta(ctx, 1e-14)
            v2 = general_series_hermite_beta(refl, 1e-14)
            if v1.degraded or v2.degraded:
                continue
            checked += 1
            assert abs(v1.value + v2.value - 1.0) < 1e-12
        assert checked >= 25

    def test_table4_complexity_ledger(self):
        # A_k costs O(N^2) ladder-weighted multiplies, the Hermite variant
        # asymptotically four times fewer for the same N
        n = 60
        ak_cost = (n + 1) * (n + 2)
        h_cost = ((n - 1) // 2 * ((n - 1) // 2 + 1) + n // 2 * (n // 2 + 1)
                  + 2 * (n + 1)) / 2
        assert 3.5 < ak_cost / h_cost < 4.5
