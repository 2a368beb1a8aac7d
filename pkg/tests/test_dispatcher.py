import math
import random

import pytest

from nigcdf import (
    DomainViolation,
    Evaluation,
    NigParams,
    ParameterError,
    cdf,
    pdf,
    sf,
)
from nigcdf.quadrature import tanh_sinh

from conftest import nig_args, nig_ref, rel_err


class TestParams:
    def test_valid(self):
        p = NigParams(2.0, -1.0, 0.3, 1.5)
        assert p.gamma == pytest.approx(math.sqrt(3.0), rel=1e-15)

    @pytest.mark.parametrize("args", [
        (0.0, 0.0, 0.0, 1.0),
        (-1.0, 0.0, 0.0, 1.0),
        (1.0, 1.0, 0.0, 1.0),
        (1.0, -1.5, 0.0, 1.0),
        (1.0, 0.0, 0.0, 0.0),
        (1.0, 0.0, 0.0, -2.0),
        (math.inf, 0.0, 0.0, 1.0),
        (1.0, math.nan, 0.0, 1.0),
    ])
    def test_invalid(self, args):
        with pytest.raises(ParameterError):
            NigParams(*args)

    def test_gamma_cancellation_guard(self):
        p = NigParams(1.0, 1.0 - 1e-14, 0.0, 1.0)
        assert p.gamma > 0
        with pytest.raises(ParameterError):
            NigParams(1.0, 1.0 - 1e-305, 0.0, 1.0)

    def test_nan_x(self):
        with pytest.raises(ParameterError):
            cdf(NigParams(1.0, 0.0, 0.0, 1.0), math.nan)


class TestProvenance:
    def test_printed_branches(self):
        fixtures = [
            # (x, alpha, beta, mu, delta) -> method per the printed conditions
            ((1.0, 1.0, 0.0, 1.0, 1.0), "exact-symmetric"),
            ((1.5, 0.5, 0.0, 1.0, 2.0), "series-b0-positive"),
            ((3.0, 1.0, 0.0, 0.0, 0.5), "quadrature"),
            ((2.3, 30.0, 0.0, 1.0, 28.0), "uniform-b0-large-alpha"),
            ((-9.0, 15.0, 0.0, 1.0, 1.0), "asymptotic-b0-large-xm"),
            ((0.0, 2.0, 1.0, 0.0, 3.0), "series-xmu-phi"),
            ((0.0, 20.0, 19.0, 0.0, 20.0), "asymptotic-xmu-large-delta"),
            ((0.0, 30.0, 5.0, 0.0, 2.0), "quadrature"),
            ((1.0, 2.0, 0.4, 0.0, 2.0), "series-general-hermite-beta"),
            ((4.0, 15.0, -6.0, 3.5, 10.0), "series-general-hermite-xmu"),
            ((2.0, 3.0, 2.0, 1.0, 2.0), "quadrature"),   # delta < 2.5 and beta > 1.5
            ((1.6, 2.0, 1.2, 0.0, 2.0), "series-general-bessel-ak"),
            ((3.0, 10.0, 8.0, 0.5, 20.0), "asymptotic-general-large-delta"),
            ((3.0, 10.0, -8.0, 0.5, 20.0), "asymptotic-general-large-delta"),
            ((-10.5, 12.0, 1.5, 0.5, 2.0), "asymptotic-general-large-xm"),
            # |beta| <= 1 is captured by the first branch, which degrades
            # in the deep tail and falls back to quadrature
            ((-10.0, 12.0, 1.0, 0.5, 2.0), "quadrature"),
            ((11.5, 12.0, -1.5, 0.5, 2.0), "asymptotic-general-large-xm"),
            ((2.0, 0.6, 0.3, 0.0, 0.4), "quadrature"),
        ]
        for (x, a, b, mu, d), method in fixtures:
            ev = cdf(NigParams(a, b, mu, d), x)
            assert ev.method == method, ((x, a, b, mu, d), ev.method, method)

    def test_limits(self):
        p = NigParams(1.0, 0.3, 0.0, 1.0)
        up = cdf(p, math.inf)
        lo = cdf(p, -math.inf)
        assert (up.value, up.method) == (1.0, "limit")
        assert (lo.value, lo.method) == (0.0, "limit")
        assert sf(p, math.inf).value == 0.0
        assert sf(p, -math.inf).value == 1.0


class TestAgainstOracle:
    @pytest.mark.parametrize("name", ["disp_a", "disp_b", "disp_c",
                                      "gen_hx_a", "gen_ad_a", "b0asym_b"])
    def test_points(self, frozen, name):
        x, a, b, mu, d = nig_args(frozen, name)
        ev = cdf(NigParams(a, b, mu, d), x)
        assert rel_err(ev.value, nig_ref(frozen, name)) < 5e-13
        assert not ev.degraded


class TestInvariants:
    def test_reflection_identity(self):
        rng = random.Random(100)
        for _ in range(300):
            a = 10 ** rng.uniform(-2, 1.6)
            b = rng.uniform(-a, a) * 0.98
            mu = rng.uniform(-5, 5)
            d = 10 ** rng.uniform(-2, 1.6)
            x = mu + rng.uniform(-8, 8)
            v1 = cdf(NigParams(a, b, mu, d), x).value
            v2 = cdf(NigParams(a, -b, -mu, d), -x).value
            assert abs(v1 + v2 - 1.0) < 1e-13, (x, a, b, mu, d)

    def test_monotone_in_x(self):
        rng = random.Random(101)
        for _ in range(12):
            a = 10 ** rng.uniform(-1.5, 1.3)
            b = rng.uniform(-a, a) * 0.9
            mu = rng.uniform(-3, 3)
            d = 10 ** rng.uniform(-1.5, 1.3)
            p = NigParams(a, b, mu, d)
            xs = [mu + t for t in
                  [u * 8 - 4 for u in [i / 80 for i in range(81)]]]
            vals = [cdf(p, x).value for x in xs]
            for v1, v2 in zip(vals, vals[1:]):
                assert v2 >= v1 - 1e-13

    def test_range(self):
        rng = random.Random(102)
        for _ in range(200):
            a = 10 ** rng.uniform(-2, 1.6)
            b = rng.uniform(-a, a) * 0.99
            mu = rng.uniform(-10, 10)
            d = 10 ** rng.uniform(-2, 1.6)
            x = mu + rng.uniform(-60, 60)
            v = cdf(NigParams(a, b, mu, d), x).value
            assert 0.0 <= v <= 1.0

    def test_sf_plus_cdf(self):
        rng = random.Random(103)
        for _ in range(100):
            a = 10 ** rng.uniform(-1.5, 1.3)
            b = rng.uniform(-a, a) * 0.9
            mu = rng.uniform(-3, 3)
            d = 10 ** rng.uniform(-1.5, 1.3)
            x = mu + rng.uniform(-6, 6)
            p = NigParams(a, b, mu, d)
            assert abs(sf(p, x).value + cdf(p, x).value - 1.0) < 1e-13

    def test_sf_deep_tail_keeps_relative_precision(self, frozen):
        # x = mu + 50 delta: 1 - cdf would round to zero
        p = NigParams(2.0, 0.8, 0.5, 1.0)
        x = p.mu + 50.0 * p.delta
        got = sf(p, x)
        assert 0.0 < got.value < 1e-20
        assert rel_err(got.value, nig_ref(frozen, "sf_deep")) < 5e-12
        # the naive route cannot see anything below ~1e-16
        assert cdf(p, x).value > 1.0 - 1e-12

    def test_derivative_matches_pdf(self):
        rng = random.Random(104)
        checked = 0
        while checked < 40:
            a = 10 ** rng.uniform(-0.5, 1.0)
            b = rng.uniform(-a, a) * 0.8
            mu = rng.uniform(-2, 2)
            d = 10 ** rng.uniform(-0.5, 1.0)
            p = NigParams(a, b, mu, d)
            x = mu + rng.uniform(-1.5, 1.5) * max(d, 1.0 / a)
            f = pdf(p, x)
            if f < 0.05:
                continue
            h = 6e-6 * max(1.0, abs(x - mu), d)
            fd = (cdf(p, x + h, 1e-14).value - cdf(p, x - h, 1e-14).value) / (2 * h)
            assert rel_err(fd, f) < 1e-6
            checked += 1


class TestPdf:
    def test_symmetric_peak_value_and_mode(self):
        from nigcdf.kernels import bessel_k01
        a, d, mu = 1.5, 2.0, 0.3
        p = NigParams(a, 0.0, mu, d)
        pair = bessel_k01(a * d, scaled=True)
        want = (a * d / (math.pi * d)) * pair.k1 * math.exp(d * a - a * d)
        assert pdf(p, mu) == pytest.approx(want, rel=1e-14)
        grid = [mu + t / 10.0 for t in range(-30, 31)]
        assert max(grid, key=lambda x: pdf(p, x)) == pytest.approx(mu, abs=1e-12)

    def test_normalization_by_quadrature(self):
        for a, b, mu, d in [(1.0, 0.0, 0.0, 1.0), (2.0, 1.0, 0.5, 3.0),
                            (0.8, -0.5, -1.0, 2.0), (5.0, 4.0, 0.0, 0.5)]:
            p = NigParams(a, b, mu, d)
            scale = max(d, 1.0 / (a - abs(b)))
            center = mu + b * d / p.gamma
            res = tanh_sinh(lambda t: pdf(p, t), center - 60 * scale,
                            center + 60 * scale, eps=1e-12, max_levels=14)
            assert abs(res.value - 1.0) < 1e-10

    def test_exponent_inequality_never_overflows(self):
        rng = random.Random(105)
        for _ in range(10000):
            a = 10 ** rng.uniform(-3, 2)
            b = rng.uniform(-a, a) * 0.999
            d = 10 ** rng.uniform(-3, 2)
            xm = rng.uniform(-50, 50)
            expo = d * math.sqrt((a - b) * (a + b)) + b * xm - a * math.hypot(xm, d)
            assert expo <= 1e-9

    def test_infinite_x(self):
        p = NigParams(1.0, 0.0, 0.0, 1.0)
        assert pdf(p, math.inf) == 0.0
