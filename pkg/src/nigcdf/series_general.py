"""General-case methods: skewed, off-centre evaluations.

The binomial Bessel series for |x - mu| -> 0, two Hermite-type series
anchored on the special-case evaluators, asymptotic expansions for
delta -> inf and |x - mu| -> inf with incomplete-gamma weights, the
saddle-coefficient machinery shared with the uniform expansions, and
the large-gamma uniform expansion.

Series here converge at rates like (beta/alpha)^k or (xm/delta)^k with
corner terms that dominate the tail, so the stopping rules watch whole
terms, and every evaluator tracks a cancellation floor; results whose
floor exceeds the target are flagged for the dispatcher to retry with
quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .kernels import (
    bessel_k01,
    std_normal_cdf,
    std_normal_pdf,
)
from .result import (
    DomainViolation,
    Evaluation,
    M_ASYMPTOTIC_GENERAL_LARGE_DELTA,
    M_ASYMPTOTIC_GENERAL_LARGE_XM,
    M_SERIES_GENERAL_BESSEL_AK,
    M_SERIES_GENERAL_HERMITE_BETA,
    M_SERIES_GENERAL_HERMITE_XMU,
    M_UNIFORM_GENERAL_LARGE_GAMMA,
    NigParams,
    NonConvergence,
)
from .series_beta0 import B0Context, _q_ladder, beta0_auto, uniform_b0_large_alpha
from .series_xmu import xmu_auto

_EPS_MACH = 2.0 ** -53
_SQRT_PI = math.sqrt(math.pi)

CAP_QUADRATIC = 120   # O(N^2) series
CAP_LINEAR = 300      # O(N) series
CAP_ASYMPTOTIC = 60
_LADDER_GUARD = 1e290


@dataclass(frozen=True)
class GeneralContext:
    """Point context for the general case."""

    xm: float
    alpha: float
    beta: float
    delta: float
    gamma: float
    omega: float

    @classmethod
    def make(cls, params: NigParams, x: float) -> "GeneralContext":
        xm = x - params.mu
        return cls(xm, params.alpha, params.beta, params.delta, params.gamma,
                   math.hypot(xm, params.delta))

    @property
    def u(self) -> float:
        return self.omega * self.beta / (self.alpha * self.xm)

    @property
    def z(self) -> float:
        return self.alpha * self.omega

    def params(self) -> NigParams:
        return NigParams(self.alpha, self.beta, 0.0, self.delta)

    def reflected(self) -> "GeneralContext":
        return GeneralContext(-self.xm, self.alpha, -self.beta, self.delta,
                              self.gamma, self.omega)


def _scaled_ladder(z: float, nu_max: int) -> list:
    """e^z K_0..K_numax(z); raises when the ladder leaves double range."""
    pair = bessel_k01(z, scaled=True)
    vals = [pair.k0, pair.k1]
    for nu in range(1, nu_max):
        nxt = vals[-2] + (2.0 * nu / z) * vals[-1]
        if nxt > _LADDER_GUARD:
            raise NonConvergence("scaled Bessel ladder overflow")
        vals.append(nxt)
    return vals


def general_series_bessel_ak(ctx: GeneralContext, eps: float = 5e-13) -> Evaluation:
    """Binomial Bessel series around x = mu.

    F = 1/2 + (xm a d e^{d g + xm b}/(pi w)) sum_k A_k/(2k+1)!! (xm^2 a/w)^k,
    A_k the alternating binomial sum over K_{k+1-j}(a w).  The Bessel
    ladder is cached once; for |u| > 1 the binomial sum is evaluated in
    powers of 1/u to keep intermediates bounded.
    """
    if ctx.xm == 0.0:
        raise DomainViolation("x = mu belongs to the centre-point evaluator")
    z = ctx.z
    u = ctx.u
    fuse = ctx.delta * ctx.gamma + ctx.xm * ctx.beta - z  # <= 0 by Cauchy-Schwarz
    efac = math.exp(fuse) if fuse > -745.0 else 0.0
    if efac == 0.0:
        return Evaluation(0.5, M_SERIES_GENERAL_BESSEL_AK, 1, 1e-300)

    inv = abs(u) > 1.0
    if inv:
        pref = -(ctx.beta * ctx.delta / math.pi) * efac
        base = 1.0 / u
        yfac = ctx.beta * ctx.beta * ctx.omega / ctx.alpha
    else:
        pref = (ctx.xm * ctx.alpha * ctx.delta / (math.pi * ctx.omega)) * efac
        base = u
        yfac = ctx.xm * ctx.xm * ctx.alpha / ctx.omega

    ladder = _scaled_ladder(z, 8)
    s = 0.0
    max_contrib = 0.0
    scale = 1.0  # yfac^k / (2k+1)!!
    tiny = 0
    first_tiny = 0
    for k in range(CAP_QUADRATIC):
        need = k + 2
        if need >= len(ladder):
            try:
                ladder = _scaled_ladder(z, max(2 * len(ladder), need))
            except NonConvergence:
                raise
        # inner binomial sum, Horner-free: running binomial and power
        acc = 0.0
        acc_abs = 0.0
        binom = 1.0
        p = 1.0
        nn = 2 * k + 1
        for j in range(nn + 1):
            order = abs(k - j) if inv else abs(k + 1 - j)
            piece = binom * p * ladder[order]
            if j % 2:
                acc -= piece
            else:
                acc += piece
            acc_abs += abs(piece)
            binom *= (nn - j) / (j + 1.0)
            p *= base
            if not math.isfinite(p) or not math.isfinite(binom):
                raise NonConvergence("binomial sum overflow")
        term = scale * acc
        s += term
        max_contrib = max(max_contrib, scale * acc_abs)
        if not math.isfinite(s):
            raise NonConvergence("A_k series overflow")
        val = 0.5 + pref * s
        if abs(pref * term) <= 0.1 * eps * max(abs(val), 1e-300):
            tiny += 1
            if tiny >= 2:
                err = abs(pref) * (2.0 * abs(term) + _EPS_MACH * max_contrib)
                return Evaluation(val, M_SERIES_GENERAL_BESSEL_AK, first_tiny, err,
                                  degraded=err > eps * max(abs(val), 1e-300))
            first_tiny = k + 1
        else:
            tiny = 0
        scale *= yfac / (2.0 * k + 3.0)
    raise NonConvergence("A_k series cap exceeded")


def general_remainder_estimates(ctx: GeneralContext, n: int):
    """Diagnostics for the A_k series remainder at truncation n.

    Returns (integral_bound, approx1, approx2) on the CDF scale: the
    quadrature bound with the sharpened lower-incomplete-gamma majorant,
    the integral approximation, and the closed Bessel approximation.
    """
    from .quadrature import tanh_sinh

    if n < 1:
        raise ValueError("n must be >= 1")
    xm, a, b, d, g, om = (ctx.xm, ctx.alpha, ctx.beta, ctx.delta, ctx.gamma, ctx.omega)
    aa = n + 0.5
    ln_gamma_aa = math.lgamma(aa)
    # ln (2^{n-1/2} (2n+1)/(2n+1)!!) with (2n+1)!! = 2^{n+1} Gamma(n+3/2)/sqrt(pi)
    ln_c = ((n - 0.5) * math.log(2.0) + math.log(2.0 * n + 1.0)
            - ((n + 1.0) * math.log(2.0) + math.lgamma(n + 1.5) - 0.5 * math.log(math.pi)))
    ln_pref = ln_c - b * xm + math.log(d / (2.0 * math.pi)) + d * g

    def weighted(fn, hi):
        def integrand(t):
            lnw = -d * d / (2.0 * t) - 0.5 * g * g * t - 1.5 * math.log(t)
            v = fn(t)
            if v <= 0.0:
                return 0.0
            lv = lnw + math.log(v)
            return math.exp(lv) if lv > -700.0 else 0.0
        t0 = (-1.5 + math.sqrt(2.25 + (g * d) ** 2)) / (g * g)
        res = 0.0
        for lo, hi_ in zip([0.0, t0, min(8 * t0, hi)], [t0, min(8 * t0, hi), hi]):
            if hi_ > lo:
                res += tanh_sinh(integrand, lo, hi_, eps=1e-10).value
        return res

    hi = 8.0 * (d / g + (abs(xm) + 1.0) / g) + 40.0 / (g * g)

    def gamma_major(t):
        zz = (b * t - xm) ** 2 / (2.0 * t)
        if zz < aa - 1.5:
            # sharpened bound z^a e^-z/(a - z - 1), else the full Gamma(a)
            ln = aa * math.log(zz) - zz - math.log(aa - zz - 1.0) if zz > 0 else -math.inf
            return math.exp(min(ln, ln_gamma_aa))
        return math.exp(ln_gamma_aa)

    bound = math.exp(ln_pref) * weighted(gamma_major, hi)

    def integrand1(t):
        q = (xm - b * t) / math.sqrt(t)
        return abs(q) ** (2 * n + 1) * math.exp(-(xm - b * t) ** 2 / (2.0 * t)) * 1.5 ** 0

    # approx1: e^{-b xm}/(2n+1)!! * I_n with the full integrand of I_n
    ln_fac2 = (n + 1.0) * math.log(2.0) + math.lgamma(n + 1.5) - 0.5 * math.log(math.pi)

    def fn1(t):
        q = (xm - b * t) / math.sqrt(t)
        e = -(xm - b * t) ** 2 / (2.0 * t)
        if e < -700.0:
            return 0.0
        return abs(q) ** (2 * n + 1) * math.exp(e)

    approx1 = math.exp(-b * xm - ln_fac2 + math.log(d / (2.0 * math.pi)) + d * g) \
        * weighted(fn1, hi)
    # approx2: 2 b^{2n+1} (w/a)^n K_n(a w)/(2n+1)!! on the CDF scale
    pair = _scaled_ladder(ctx.z, max(n, 1))
    ln_a2 = (math.log(2.0) + (2 * n + 1) * math.log(abs(b)) + n * (math.log(om) - math.log(a))
             + math.log(pair[n]) - ctx.z - ln_fac2 + math.log(d / (2.0 * math.pi)) + d * g)
    approx2 = math.exp(ln_a2) if ln_a2 > -745.0 else 0.0
    return bound, approx1, approx2


def _hermite_series(ctx: GeneralContext, base: Evaluation, ladder_arg: float,
                    outer: float, cfac: float, pref: float, fuse: float,
                    order_offset: int, method: str, eps: float, cap: int) -> Evaluation:
    """Shared core of the two Hermite-type series.

    Sums sum_k 1/(k+1) sum_j (-1)^j outer^{k-2j} cfac^j / (j!(k-2j)!)
    K_{j+off}(arg).  The j-sum is anchored at the corner j = floor(k/2)
    and iterated downward, each step multiplying by outer^2, so nothing
    blows up when `outer` (beta or x-mu, depending on the variant) is
    tiny; the prefactor is folded via `fuse`.
    """
    efac = math.exp(fuse) if fuse > -745.0 else 0.0
    if efac == 0.0:
        return Evaluation(base.value, method, base.terms, base.err_estimate, base.degraded)
    scale_out = pref * efac
    ladder = _scaled_ladder(ladder_arg, 8)
    # corner weights: even k = 2h: E_h = cfac^h/h!; odd k: E_h * outer
    corner_even = 1.0
    s = 0.0
    abs_sum = 0.0
    max_contrib = 0.0
    down = -outer * outer  # one downward j-step multiplies by this over ratios
    tiny = 0
    first_tiny = 0
    terms = 0
    term = 0.0
    for k in range(cap):
        h, parity = divmod(k, 2)
        if k > 0 and parity == 0:
            corner_even *= cfac / h
        if h + order_offset + 1 >= len(ladder):
            ladder = _scaled_ladder(ladder_arg, 2 * len(ladder))
        top = corner_even if parity == 0 else corner_even * outer
        if h % 2:
            top = -top  # (-1)^h from the corner sign
        inner = 0.0
        inner_abs = 0.0
        tj = top
        j = h
        while True:
            piece = tj * ladder[j + order_offset]
            inner += piece
            inner_abs += abs(piece)
            if j == 0 or tj == 0.0:
                break
            # t_{j-1}/t_j = -outer^2 j / (cfac (k-2j+1)(k-2j+2))
            tj *= down * j / (cfac * (k - 2 * j + 1.0) * (k - 2 * j + 2.0))
            j -= 1
        term = inner / (k + 1.0)
        s += term
        abs_sum += abs(term)
        max_contrib = max(max_contrib, inner_abs / (k + 1.0))
        terms = k + 1
        if not math.isfinite(s):
            raise NonConvergence("hermite series overflow")
        run_val = base.value + scale_out * s
        if abs(scale_out * term) <= 0.1 * eps * max(abs(run_val), 1e-300):
            tiny += 1
            if tiny >= 2:
                terms = first_tiny
                break
            first_tiny = k + 1
        else:
            tiny = 0
    else:
        raise NonConvergence("hermite series cap exceeded")
    corr = pref * efac * s
    val = base.value + corr
    err = (base.err_estimate
           + abs(pref) * efac * (abs(term) * 2.0
                                 + _EPS_MACH * (max_contrib + abs_sum)))
    return Evaluation(val, method, terms, err,
                      degraded=base.degraded or err > eps * max(abs(val), 1e-300))


def general_series_hermite_xmu(ctx: GeneralContext, eps: float = 5e-13) -> Evaluation:
    """Hermite-type series around x = mu, anchored on the centre value.

    F = F(mu) + (e^{d g} xm a / pi) sum_k (b xm)^k/(k+1) A_k with A_k over
    K_{j+1}(a d); the weight scale is rewritten so beta -> 0 stays finite:
    (b xm)^k (a/(2 d b^2))^j = xm^k b^{k-2j} (a/(2d))^j.
    """
    base = xmu_auto(NigParams(ctx.alpha, ctx.beta, 0.0, ctx.delta), 0.5 * eps)
    if ctx.xm == 0.0:
        return Evaluation(base.value, M_SERIES_GENERAL_HERMITE_XMU, base.terms,
                          base.err_estimate, base.degraded)
    ad = ctx.alpha * ctx.delta
    fuse = ctx.delta * ctx.gamma - ad
    # piece_{k,j} = (-1)^j (b xm)^{k-2j} (xm^2 a/(2d))^j K_{j+1}(ad)/(j!(k-2j)!)
    return _hermite_series(ctx, base, ad, ctx.beta * ctx.xm,
                           ctx.xm * ctx.xm * ctx.alpha / (2.0 * ctx.delta),
                           ctx.xm * ctx.alpha / math.pi, fuse, 1,
                           M_SERIES_GENERAL_HERMITE_XMU, eps, CAP_LINEAR)


def general_series_hermite_beta(ctx: GeneralContext, eps: float = 5e-13) -> Evaluation:
    """Hermite-type series in beta, anchored on the symmetric case at gamma.

    F = F(x; gamma, 0) - (b d e^{d g}/pi) sum_k (b xm)^k/(k+1) B_k with
    B_k over K_j(g w).
    """
    sym = NigParams(ctx.gamma, 0.0, 0.0, ctx.delta)
    base = beta0_auto(sym, ctx.xm, 0.5 * eps)
    if ctx.beta == 0.0:
        return Evaluation(base.value, M_SERIES_GENERAL_HERMITE_BETA, base.terms,
                          base.err_estimate, base.degraded)
    gw = ctx.gamma * ctx.omega
    fuse = ctx.delta * ctx.gamma - gw  # <= 0 since omega >= delta
    # piece_{k,j} = (-1)^j (b xm)^{k-2j} (b^2 w/(2 g))^j K_j(g w)/(j!(k-2j)!)
    return _hermite_series(ctx, base, gw, ctx.beta * ctx.xm,
                           ctx.beta * ctx.beta * ctx.omega / (2.0 * ctx.gamma),
                           -ctx.beta * ctx.delta / math.pi, fuse, 0,
                           M_SERIES_GENERAL_HERMITE_BETA, eps, CAP_LINEAR)


def _q_sequence_terms(w: float, kmax: int):
    """Q(2k+1, w) for k = 0..kmax via the forward recurrence, either sign of w.

    For w < 0 the increments alternate in sign and can dwarf the sums, so
    the largest intermediate is returned as a cancellation noise scale.
    """
    q = math.exp(-w)
    p = q
    out = [q]
    peaks = [0.0]  # the k = 0 seed carries no summation error
    peak = 0.0
    a = 0
    for _ in range(kmax):
        for _ in range(2):
            p *= w / (a + 1.0)
            q += p
            a += 1
            if abs(q) > _LADDER_GUARD or abs(p) > _LADDER_GUARD:
                raise NonConvergence("incomplete gamma recurrence overflow")
            peak = max(peak, abs(p))
        out.append(q)
        peaks.append(peak)
    return out, peaks


def general_asymptotic_large_delta(ctx: GeneralContext, eps: float = 5e-13) -> Evaluation:
    """Asymptotic expansion for delta -> inf with regularized gamma weights.

    Requires beta > 0 (callers reflect).  Terms can rise while the
    Q(2k+1, -(x-mu) beta) weights saturate, so truncation tracks the
    running minimum past the transient.
    """
    if ctx.beta <= 0.0:
        raise DomainViolation("requires beta > 0 (reflect first)")
    a, b, d = ctx.alpha, ctx.beta, ctx.delta
    ad = a * d
    w = -ctx.xm * b
    fuse = d * ctx.gamma - ad
    pref_ln = math.log(a / (math.pi ** 1.5 * b))
    ladder = _scaled_ladder(ad, CAP_ASYMPTOTIC + 2)
    qs, q_peaks = _q_sequence_terms(w, CAP_ASYMPTOTIC + 1)
    fac = -2.0 * a / (b * b * d)
    transient = int(abs(w) / 2.0) + 2
    gam = _SQRT_PI  # Gamma(k + 1/2)
    pw = 1.0
    best_s = None
    best_err = math.inf
    s = 0.0
    noise = 0.0
    min_at = math.inf
    terms = 0
    for k in range(CAP_ASYMPTOTIC):
        t = qs[k] * gam * pw * ladder[k + 1]
        noise = max(noise, 4.0 * _EPS_MACH * q_peaks[k] * gam * abs(pw) * ladder[k + 1])
        at = abs(t)
        if k >= transient and at > min_at:
            break
        s += t
        terms = k + 1
        if at < min_at:
            min_at = at
            best_s = s
            best_err = at
        if at <= 0.1 * eps * max(abs(s), 1e-300):
            best_s = s
            best_err = at
            break
        gam *= k + 0.5
        pw *= fac
    if best_s is None:
        best_s, best_err = s, abs(t)
    from .series_xmu import _assemble_exp
    rel = (best_err + noise) / max(abs(best_s), 1e-300)
    return _assemble_exp(best_s, fuse + pref_ln, rel, eps,
                         M_ASYMPTOTIC_GENERAL_LARGE_DELTA, terms)


def general_asymptotic_large_xm(ctx: GeneralContext, eps: float = 5e-13) -> Evaluation:
    """Asymptotic expansion for x - mu -> -inf (callers reflect the right tail).

    Terms carry Gamma(2k+1, -(x-mu) beta)/k! (w/(2 g xm^2))^k K_k(g w); the
    k-th power on the midfactor follows from the beta -> 0 limit.
    """
    if ctx.xm >= 0.0:
        raise DomainViolation("requires x - mu < 0 (reflect first)")
    g, xm, b = ctx.gamma, ctx.xm, ctx.beta
    gw = g * ctx.omega
    w = -xm * b
    fuse = ctx.delta * g - gw
    pref = -ctx.delta / (math.pi * xm)
    ladder = _scaled_ladder(gw, CAP_ASYMPTOTIC + 1)
    fac = ctx.omega / (2.0 * g * xm * xm)
    # Gamma(2k+1, w)/k! = Q(2k+1, w) (2k)!/k!
    qs, q_peaks = _q_sequence_terms(w, CAP_ASYMPTOTIC + 1)
    transient = int(abs(w) / 2.0) + 2
    ratio_gamma = 1.0  # (2k)!/k! running
    pw = 1.0
    s = 0.0
    noise = 0.0
    min_at = math.inf
    best_s = None
    best_err = math.inf
    terms = 0
    for k in range(CAP_ASYMPTOTIC):
        t = qs[k] * ratio_gamma * pw * ladder[k]
        noise = max(noise, 4.0 * _EPS_MACH * q_peaks[k] * ratio_gamma * abs(pw) * ladder[k])
        if k % 2:
            t = -t
        at = abs(t)
        if k >= transient and at > min_at:
            break
        s += t
        terms = k + 1
        if at < min_at:
            min_at = at
            best_s = s
            best_err = at
        if at <= 0.1 * eps * max(abs(s), 1e-300):
            best_s = s
            best_err = at
            break
        ratio_gamma *= (2.0 * k + 1.0) * (2.0 * k + 2.0) / (k + 1.0)
        pw *= fac
    if best_s is None:
        best_s, best_err = s, abs(t)
    from .series_xmu import _assemble_exp
    rel = (best_err + noise) / max(abs(best_s), 1e-300)
    return _assemble_exp(best_s * math.copysign(1.0, pref), fuse + math.log(abs(pref)),
                         rel, eps, M_ASYMPTOTIC_GENERAL_LARGE_XM, terms)


@dataclass
class CkCoefficients:
    """Saddle-expansion coefficients of Phi(a/sqrt t + b sqrt t) at t = r."""

    r: float
    a: float
    b: float
    values: list = field(default_factory=list)


def ck_coefficients(a: float, b: float, r: float, k_max: int) -> CkCoefficients:
    """c_0..c_kmax from the printed seeds and the five-term recurrence."""
    if not r > 0.0:
        raise DomainViolation("expansion centre r must be positive")
    if b == 0.0:
        from .series_beta0 import _ck_beta0
        return CkCoefficients(r, a, b, _ck_beta0(a, r, k_max))
    if a == b * r:
        raise DomainViolation("degenerate centre: a = b r makes the recurrence singular")
    u = r
    arg = a / math.sqrt(u) + b * math.sqrt(u)
    phi = std_normal_pdf(arg)
    ru = math.sqrt(u)
    d1 = (-a + b * u) / (2.0 * u * ru)
    d2 = (a ** 3 - 3 * a * u - a * a * b * u + b * u * u - a * b * b * u * u
          + b ** 3 * u ** 3) / (8.0 * u ** 3 * ru)
    d3 = (-a ** 5 + 10 * a ** 3 * u + a ** 4 * b * u - 15 * a * u * u
          - 6 * a * a * b * u * u + 2 * a ** 3 * b * b * u * u + 3 * b * u ** 3
          - 6 * a * b * b * u ** 3 - 2 * a * a * b ** 3 * u ** 3 + 2 * b ** 3 * u ** 4
          - a * b ** 4 * u ** 4 + b ** 5 * u ** 5) / (48.0 * u ** 5 * ru)
    c = [std_normal_cdf(arg), phi * d1, -phi * d2, phi * d3]
    for k in range(0, k_max - 3):
        f0 = -k * b ** 3
        f1 = -(1 + k) * b * (1 + 2 * k - a * b + 3 * b * b * u)
        f2 = (2 + k) * (5 * a + 2 * k * a + a * a * b - 8 * b * u - 6 * k * b * u
                        + 2 * a * b * b * u - 3 * b ** 3 * u * u)
        f3 = -(3 + k) * (a ** 3 - 11 * a * u - 4 * k * a * u - a * a * b * u
                         + 13 * b * u * u + 6 * k * b * u * u - a * b * b * u * u
                         + b ** 3 * u ** 3)
        f4 = 2.0 * (3 + k) * (4 + k) * u * u * (-a + b * u)
        c.append((f0 * c[k] + f1 * c[k + 1] + f2 * c[k + 2] + f3 * c[k + 3]) / f4)
    return CkCoefficients(r, a, b, c[:k_max + 1])


def uniform_general_large_gamma(ctx: GeneralContext, k_max: int = 40) -> Evaluation:
    """Uniform expansion for gamma -> inf (diagnostic; not routed)."""
    if ctx.beta == 0.0:
        sub = uniform_b0_large_alpha(
            B0Context.make(ctx.alpha, ctx.delta, ctx.xm, 0.0), k_max)
        return Evaluation(sub.value, M_UNIFORM_GENERAL_LARGE_GAMMA, sub.terms,
                          sub.err_estimate, sub.degraded)
    g, d = ctx.gamma, ctx.delta
    zeta = 0.5 * g * d
    r = d / g
    c = ck_coefficients(ctx.xm, -ctx.beta, r, k_max).values
    qs = _q_ladder(zeta, k_max)
    pref = g * d / (2.0 * _SQRT_PI)
    s = 0.0
    scale = 1.0
    tiny = 0
    grow = 0
    prev_at = math.inf
    min_at = math.inf
    best_s = 0.0
    best_k = 0
    for k in range(k_max + 1):
        term = c[k] * qs[k] * scale
        at = abs(term)
        if at > 0.0:
            grow = grow + 1 if at > prev_at else 0
            prev_at = at
        if k >= 4 and grow >= 2 and at > 10.0 * min_at:
            err = pref * min_at
            val = pref * best_s
            return Evaluation(val, M_UNIFORM_GENERAL_LARGE_GAMMA, best_k, err,
                              degraded=err > 5e-13 * max(abs(val), 1e-300))
        s += term
        if 0.0 < at < min_at:
            min_at, best_s, best_k = at, s, k + 1
        if at <= _EPS_MACH * abs(s):
            tiny += 1
            if tiny >= 2:
                return Evaluation(pref * s, M_UNIFORM_GENERAL_LARGE_GAMMA, k + 1,
                                  pref * at + _EPS_MACH * abs(pref * s))
        else:
            tiny = 0
        scale *= 2.0 / (g * g)
    raise NonConvergence("uniform expansion did not stabilize before k_max")
