import math
import random

import pytest

from nigcdf.kernels import (
    bessel_k01,
    bessel_k_half,
    bessel_k_sequence,
    erfcx,
    gauss_2f1_restricted,
    lambert_w0_approx,
    lambert_w0_exact,
    lambert_wm1_approx,
    lambert_wm1_exact,
    log_std_normal_cdf,
    regularized_upper_gamma_seq,
    std_normal_cdf,
    std_normal_pdf,
    upper_gamma_seq,
)
from nigcdf.result import DomainViolation, NonConvergence

from conftest import rel_err


class TestBesselK01:
    def test_against_frozen_oracle(self, frozen):
        for z in ("0.001", "0.09", "0.5", "1", "2", "3.7", "10", "88.5", "400", "705"):
            pair = bessel_k01(float(z))
            assert rel_err(pair.k0, float(frozen[f"K0({z})"])) < 1e-15
            assert rel_err(pair.k1, float(frozen[f"K1({z})"])) < 1e-15

    def test_scaled_large_arguments(self, frozen):
        for z in ("1e3", "1e5", "1e6"):
            pair = bessel_k01(float(z), scaled=True)
            assert rel_err(pair.k0, float(frozen[f"K0s({z})"])) < 1e-15
            assert rel_err(pair.k1, float(frozen[f"K1s({z})"])) < 1e-15
            assert pair.k0 > 0 and pair.k1 > pair.k0

    def test_scaled_tracks_asymptotic_form(self):
        z = 1e5
        pair = bessel_k01(z, scaled=True)
        lead = math.sqrt(math.pi / (2 * z))
        assert rel_err(pair.k0, lead) < 1e-4
        assert rel_err(pair.k1, lead) < 1e-4

    def test_half_integer_ordering(self):
        # K_1(2) < K_{3/2}(2), explicit elementary form
        k32 = math.sqrt(math.pi / 4.0) * math.exp(-2.0) * 1.5
        assert bessel_k_half(1, 2.0) == pytest.approx(k32, rel=1e-15)
        assert bessel_k01(2.0).k1 < k32

    def test_underflow_horizon(self):
        pair = bessel_k01(800.0)
        assert pair.underflow and pair.k0 == 0.0 and pair.k1 == 0.0
        assert not bessel_k01(800.0, scaled=True).underflow

    def test_domain(self):
        with pytest.raises(DomainViolation):
            bessel_k01(0.0)
        with pytest.raises(DomainViolation):
            bessel_k01(-1.0)

    def test_scaled_unscaled_consistency(self):
        rng = random.Random(5)
        for _ in range(200):
            z = 10 ** rng.uniform(-3, 2.5)
            a = bessel_k01(z)
            b = bessel_k01(z, scaled=True)
            assert rel_err(a.k0 * math.exp(z), b.k0) < 1e-14
            assert rel_err(a.k1 * math.exp(z), b.k1) < 1e-14


class TestKSequence:
    def test_recurrence_identity_exact(self):
        seq = bessel_k_sequence(2, 1.0)
        assert seq.values[2] == pytest.approx(seq.values[0] + 2.0 * seq.values[1], rel=1e-15)

    def test_against_frozen_ladder(self, frozen):
        seq = bessel_k_sequence(5, 0.09)
        for nu in range(6):
            assert rel_err(seq.values[nu], float(frozen[f"K{nu}(0.09)"])) < 1e-13

    def test_matches_k01(self):
        seq = bessel_k_sequence(1, 3.0)
        pair = bessel_k01(3.0)
        assert seq.values[0] == pytest.approx(pair.k0, rel=1e-15)
        assert seq.values[1] == pytest.approx(pair.k1, rel=1e-15)

    def test_recurrence_residual_random(self):
        rng = random.Random(11)
        for _ in range(300):
            z = rng.uniform(0.1, 100.0)
            nu_max = rng.randint(2, 50)
            seq = bessel_k_sequence(nu_max, z, scaled=True)
            for nu in range(1, nu_max):
                lhs = seq.values[nu + 1]
                rhs = seq.values[nu - 1] + 2.0 * nu / z * seq.values[nu]
                assert abs(lhs - rhs) <= 1e-12 * lhs

    def test_switches_to_scaled_past_horizon(self):
        # unscaled values underflow for z > ~705; the scaled ladder is returned
        seq = bessel_k_sequence(5, 800.0)
        assert seq.scaled
        assert all(v > 0 and math.isfinite(v) for v in seq.values)

    def test_overflow_flag_when_scaled_ladder_overflows(self):
        seq = bessel_k_sequence(200, 0.01)
        assert seq.overflow and seq.scaled


class TestBesselBounds:
    def test_lemma_upper_bound(self):
        # K_{nu+1}(z) < Gamma(nu+1) 2^nu / z^{nu+1}
        rng = random.Random(23)
        for _ in range(10000):
            nu = rng.randint(0, 40)
            z = 10 ** rng.uniform(-1, 2)
            seq = bessel_k_sequence(nu + 1, z, scaled=True)
            lhs = math.log(seq.values[nu + 1]) - z
            rhs = math.lgamma(nu + 1.0) + nu * math.log(2.0) - (nu + 1) * math.log(z)
            assert lhs < rhs

    def test_ratio_upper_bound(self):
        rng = random.Random(29)
        for _ in range(10000):
            nu = rng.randint(0, 40)
            z = 10 ** rng.uniform(-1, 2)
            seq = bessel_k_sequence(nu + 2, z, scaled=True)
            ratio = seq.values[nu + 2] / seq.values[nu + 1]
            h = nu + 1.5
            assert ratio < (h + math.sqrt(h * h + z * z)) / z


class TestBesselKHalf:
    def test_closed_forms(self):
        z = 2.0
        assert bessel_k_half(0, z) == pytest.approx(
            math.sqrt(math.pi / (2 * z)) * math.exp(-z), rel=1e-15)
        z = 1.0
        assert bessel_k_half(1, z) == pytest.approx(
            math.sqrt(math.pi / (2 * z)) * math.exp(-z) * 2.0, rel=1e-15)

    def test_against_oracle(self, frozen):
        assert rel_err(bessel_k_half(3, 0.5), float(frozen["K3.5(0.5)"])) < 1e-14

    def test_recurrence_consistency(self):
        z = 0.5
        k = [bessel_k_half(n, z) for n in range(5)]
        for n in range(1, 4):
            nu = n + 0.5
            assert k[n + 1] == pytest.approx(k[n - 1] + 2 * nu / z * k[n], rel=1e-13)


class TestLambert:
    def test_w0_approx_identity_at_e(self):
        assert lambert_w0_approx(math.e) == pytest.approx(1.0, rel=1e-15)

    def test_w0_approx_is_upper_bound(self, frozen):
        assert lambert_w0_approx(100.0) >= float(frozen["W0(100)"])

    def test_w0_approx_within_5pct(self, frozen):
        assert rel_err(lambert_w0_approx(1e10), float(frozen["W0(1e10)"])) < 0.05

    def test_wm1_approx_branch_point(self):
        w = lambert_wm1_approx(-1.0 / math.e + 1e-14)
        assert abs(w + 1.0) < 3.5e-3

    def test_wm1_approx_tolerance(self, frozen):
        for z in ("-0.2", "-1e-6"):
            assert rel_err(lambert_wm1_approx(float(z)), float(frozen[f"Wm1({z})"])) < 3.5e-3

    def test_wm1_exact_residual_on_log_grid(self):
        for k in range(1, 250):
            z = -(10.0 ** -k)
            if z <= -1.0 / math.e:
                continue
            w = lambert_wm1_exact(z)
            assert abs(w * math.exp(w) - z) <= 1e-13 * abs(z)

    def test_wm1_exact_branch_point(self):
        assert lambert_wm1_exact(-1.0 / math.e) == -1.0

    def test_wm1_tiny_argument_asymptotic(self):
        z = -1e-300
        w = lambert_wm1_exact(z)
        l1 = math.log(-z)
        l2 = math.log(-l1)
        assert math.isfinite(w)
        assert abs(w - (l1 - l2)) < abs(l2)  # within the next correction's size

    def test_w0_exact_residual(self):
        for z in (1e-3, 0.5, 3.0, 50.0, 1e8, 1e300):
            w = lambert_w0_exact(z)
            if z <= 1e300:
                resid = abs(w * math.exp(min(w, 700.0)) - z) if w < 700 else 0.0
                if w < 700:
                    assert resid <= 1e-12 * z

    def test_domains(self):
        with pytest.raises(DomainViolation):
            lambert_w0_approx(0.5)
        with pytest.raises(DomainViolation):
            lambert_wm1_approx(0.1)
        with pytest.raises(DomainViolation):
            lambert_wm1_exact(-1.0)


class TestNormal:
    def test_center_and_pdf(self):
        assert std_normal_cdf(0.0) == 0.5
        assert std_normal_pdf(0.0) == pytest.approx(1.0 / math.sqrt(2 * math.pi), rel=1e-16)

    def test_tail_value(self, frozen):
        assert rel_err(std_normal_cdf(-8.0), float(frozen["Phi(-8)"])) < 1e-15
        assert rel_err(std_normal_cdf(-37.0), float(frozen["Phi(-37)"])) < 1e-13

    def test_infinities(self):
        assert std_normal_cdf(math.inf) == 1.0
        assert std_normal_cdf(-math.inf) == 0.0

    def test_log_cdf_deep_tail(self, frozen):
        assert rel_err(log_std_normal_cdf(-30.0), float(frozen["logPhi(-30)"])) < 1e-13
        # far beyond erfc underflow, must stay finite
        assert math.isfinite(log_std_normal_cdf(-2e4))

    def test_erfcx_matches_scipy(self):
        scipy_special = pytest.importorskip("scipy.special")
        for y in (0.0, 0.3, 1.0, 5.0, 14.9, 15.1, 40.0, 1e4):
            assert rel_err(erfcx(y), float(scipy_special.erfcx(y))) < 5e-15


class TestUpperGamma:
    def test_seed(self):
        for z in (0.3, 2.0, 17.0):
            assert upper_gamma_seq(0, z)[0] == pytest.approx(math.exp(-z), rel=1e-15)

    def test_gamma_3_2(self, frozen):
        got = upper_gamma_seq(1, 2.0)[1]
        assert rel_err(got, float(frozen["Gamma(3,2)"])) < 1e-14
        assert got == pytest.approx(2 * math.exp(-2.0) * 5, rel=1e-14)

    def test_large_order(self, frozen):
        got = upper_gamma_seq(10, 50.0)[10]
        assert rel_err(got, float(frozen["Gamma(21,50)"])) < 1e-13

    def test_regularized(self, frozen):
        got = regularized_upper_gamma_seq(10, 50.0)[10]
        assert rel_err(got, float(frozen["Q(21,50)"])) < 1e-13

    def test_negative_argument(self, frozen):
        got = upper_gamma_seq(3, -3.0)[3]
        assert rel_err(got, float(frozen["Gamma(7,-3)"])) < 1e-13


class Test2F1:
    def test_empty_series(self):
        assert gauss_2f1_restricted(7, -1.5, 0.0) == 1.0

    def test_against_oracle(self, frozen):
        got = gauss_2f1_restricted(1, 1.5, 0.25)
        assert rel_err(got, float(frozen["2F1(1,1,1.5,0.25)"])) < 1e-14
        got = gauss_2f1_restricted(5, -2.5, 0.5)
        assert rel_err(got, float(frozen["2F1(1,5,-2.5,0.5)"])) < 1e-11

    def test_cap_signals(self):
        with pytest.raises(NonConvergence):
            gauss_2f1_restricted(4000.0, 0.5, 0.999)

    def test_domain(self):
        with pytest.raises(DomainViolation):
            gauss_2f1_restricted(1, 1.5, 1.0)
        with pytest.raises(DomainViolation):
            gauss_2f1_restricted(1, -2.0, 0.5)
