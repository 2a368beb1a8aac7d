"""Methods for the symmetric case beta = 0.

Two convergent series (positive-term and alternating), the exponentially
improved accelerated series, the alternating asymptotic expansion for
large |x - mu|, the uniform expansion for large alpha, their term-count
estimators and remainder bounds, and the region router.

Every evaluator fuses the e^{delta alpha} prefactor with exponentially
scaled Bessel factors, so nothing here overflows for admissible
parameters; term recursions ride on the Bessel neighbour-ratio
recurrence instead of materialized ladders.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .kernels import (
    _gauss_2f1_info,
    bessel_k01,
    lambert_w0_exact,
    lambert_w0_ln,
    std_normal_cdf,
    std_normal_pdf,
)
from .result import (
    DomainViolation,
    Evaluation,
    M_ASYMPTOTIC_B0_LARGE_XM,
    M_EXACT_SYMMETRIC,
    M_SERIES_B0_ACCELERATED,
    M_SERIES_B0_ALTERNATING,
    M_SERIES_B0_POSITIVE,
    M_UNIFORM_B0_LARGE_ALPHA,
    NigParams,
    NonConvergence,
    TermEstimate,
)

_SQRT_PI = math.sqrt(math.pi)
_EPS_MACH = 2.0 ** -53

SERIES_CAP = 2000
ASYMPTOTIC_CAP = 60
UNIFORM_KMAX = 40


@dataclass(frozen=True)
class B0Context:
    """Point context for beta = 0: x - mu and derived magnitudes."""

    xm: float
    alpha: float
    delta: float
    omega: float
    aw: float
    ad: float

    @classmethod
    def make(cls, alpha: float, delta: float, x: float, mu: float) -> "B0Context":
        xm = x - mu
        om = math.hypot(xm, delta)
        return cls(xm, alpha, delta, om, alpha * om, alpha * delta)

    def reflected(self) -> "B0Context":
        return B0Context(-self.xm, self.alpha, self.delta, self.omega, self.aw, self.ad)


def _bound_c(A2: float, n: float, aw: float) -> float:
    """Geometric-ratio bound C for the positive series remainder at index n."""
    h = n + 1.5
    return A2 * (h + math.sqrt(h * h + aw * aw)) / (2.0 * n + 3.0)


def series_b0_positive(ctx: B0Context, eps: float = 5e-13) -> Evaluation:
    """Absolutely convergent positive-term series around x = mu.

    F = 1/2 + (delta e^{da}/pi)(a xm/w) sum_k ((xm^2 a/w)^k K_{k+1}(aw)/(2k+1)!!),
    stopped when the geometric remainder bound drops below eps or the
    partial sums stabilize.
    """
    if ctx.xm == 0.0:
        return Evaluation(0.5, M_SERIES_B0_POSITIVE, 0, 0.0)
    aw = ctx.aw
    fuse = ctx.ad - aw  # <= 0 since omega >= delta
    efac = math.exp(fuse) if fuse > -745.0 else 0.0
    pref = (ctx.delta / math.pi) * ctx.xm * ctx.alpha / ctx.omega
    if efac == 0.0:
        raise NonConvergence("series scale underflow (far outside region)")
    pair = bessel_k01(aw, scaled=True)
    r = pair.k1 / pair.k0
    t = pair.k1 * efac
    zf = ctx.xm * ctx.xm * ctx.alpha / ctx.omega
    A2 = (ctx.xm / ctx.omega) ** 2
    apref = abs(pref)
    s = 0.0
    tiny_streak = 0
    for k in range(SERIES_CAP):
        s += t
        r = 1.0 / r + 2.0 * (k + 1) / aw
        t = t * zf * r / (2.0 * k + 3.0)
        if not math.isfinite(t):
            raise NonConvergence("positive series term overflow")
        n = k + 1
        cb = _bound_c(A2, n, aw)
        if cb < 1.0:
            rem = apref * abs(t) / (1.0 - cb)
            if rem <= 0.1 * eps * max(abs(0.5 + pref * s), 1e-300):
                return Evaluation(0.5 + pref * s, M_SERIES_B0_POSITIVE, n, rem)
        if abs(t) <= 0.25 * _EPS_MACH * abs(s):
            tiny_streak += 1
            if tiny_streak >= 2:
                return Evaluation(0.5 + pref * s, M_SERIES_B0_POSITIVE, n,
                                  apref * abs(t) * 4.0)
        else:
            tiny_streak = 0
    raise NonConvergence("positive series term cap exceeded")


def series_b0_alternating(ctx: B0Context, eps: float = 5e-13) -> Evaluation:
    """Alternating companion series; only convergent for |x - mu| < delta."""
    if abs(ctx.xm) >= ctx.delta:
        raise DomainViolation("alternating series diverges for |x-mu| >= delta")
    if ctx.xm == 0.0:
        return Evaluation(0.5, M_SERIES_B0_ALTERNATING, 0, 0.0)
    ad = ctx.ad
    pair = bessel_k01(ad, scaled=True)  # e^{da} K_{k+1}(ad): fused exactly
    r = pair.k1 / pair.k0
    t = pair.k1
    m2 = ctx.xm * ctx.xm * ctx.alpha / (2.0 * ctx.delta)
    pref = ctx.xm * ctx.alpha / math.pi
    apref = abs(pref)
    s = 0.0
    last = math.inf
    for k in range(SERIES_CAP):
        s += t
        r = 1.0 / r + 2.0 * (k + 1) / ad
        t = t * (-m2) * r * (2.0 * k + 1.0) / ((k + 1.0) * (2.0 * k + 3.0))
        at = abs(t)
        if at < last and apref * at <= 0.1 * eps * max(abs(0.5 + pref * s), 1e-300):
            return Evaluation(0.5 + pref * s, M_SERIES_B0_ALTERNATING, k + 1, apref * at)
        last = at
    raise NonConvergence("alternating series stalled (|x-mu| ~ delta)")


def estimate_n_b0_positive(ctx: B0Context, eps: float = _EPS_MACH) -> TermEstimate:
    """Term count for the positive series from the Lambert closed form.

    Solves B'' A^{2N} / sqrt(N + 1/2) = eps with the principal real
    branch; the huge-argument evaluation runs on logarithms, which
    subsumes the two-term asymptotic regime.  An optional refinement
    pass re-selects N by bisection on the large-argument term estimate
    when the closed form exceeds 200 terms in that regime.
    """
    if ctx.xm == 0.0:
        return TermEstimate(1, 0.0, M_SERIES_B0_POSITIVE)
    A2 = (ctx.xm / ctx.omega) ** 2
    if not A2 < 1.0:
        raise DomainViolation("requires (x-mu)^2 < omega^2")
    L = -2.0 * math.log(A2)  # -log(A^4)
    ln_bpp = math.log(abs(ctx.xm) * ctx.delta / (2.0 * _SQRT_PI * ctx.omega * ctx.omega)) + ctx.ad
    ln_d = math.log(L) - 2.0 * (math.log(eps) - ln_bpp) - math.log(A2)
    w = lambert_w0_ln(ln_d)
    n = max(1, math.ceil(w / L - 0.5))
    n = _refine_large_aw(ctx, eps, n)
    try:
        pred = bound_remainder_b0_positive(ctx, n)
    except NonConvergence:
        pred = math.inf
    return TermEstimate(n, pred, M_SERIES_B0_POSITIVE)


def _refine_large_aw(ctx: B0Context, eps: float, n: int) -> int:
    """Binary-search refinement using the aw -> inf term estimate."""
    aw = ctx.aw
    if n <= 200 or aw < 30.0:
        return n
    ln_pref = math.log(ctx.delta * abs(ctx.xm) * ctx.alpha / (math.pi * ctx.omega)) + ctx.ad
    ln_z = math.log(ctx.xm * ctx.xm * ctx.alpha / ctx.omega)
    ln_tail_const = ln_pref + 0.5 * math.log(math.pi / (2.0 * aw)) - aw

    def ln_term(nn: float) -> float:
        # (2n+1)!! = 2^{n+1} Gamma(n + 3/2) / sqrt(pi)
        ln_fac2 = (nn + 1.0) * math.log(2.0) + math.lgamma(nn + 1.5) - 0.5 * math.log(math.pi)
        return ln_tail_const + nn * ln_z - ln_fac2

    lo, hi = 1, n
    if ln_term(hi) > math.log(eps):
        return n
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ln_term(mid) <= math.log(eps):
            hi = mid
        else:
            lo = mid
    # the large-argument estimate is only trustworthy while N^2 << aw
    if hi * hi <= aw:
        return hi
    return n


def bound_remainder_b0_positive(ctx: B0Context, n: int) -> float:
    """Rigorous remainder bound |R_n| <= bound(T_n)/(1 - C) on the CDF scale."""
    if n < 1:
        raise ValueError("n must be >= 1")
    A2 = (ctx.xm / ctx.omega) ** 2
    cb = _bound_c(A2, float(n), ctx.aw)
    if cb >= 1.0:
        raise NonConvergence("geometric ratio bound >= 1; bound unavailable")
    ln_t = -math.log(2.0 * ctx.aw) + n * math.log(A2) + 0.5 * (math.log(math.pi) - math.log(n + 0.5))
    ln_pref = math.log(ctx.delta * abs(ctx.xm) * ctx.alpha / (math.pi * ctx.omega)) + ctx.ad
    return math.exp(ln_t + ln_pref) / (1.0 - cb)


def estimate_n_b0_accelerated(ctx: B0Context, eps: float = _EPS_MACH) -> TermEstimate:
    """Term count for the accelerated series via the principal branch."""
    if ctx.xm == 0.0:
        return TermEstimate(1, 0.0, M_SERIES_B0_ACCELERATED)
    m = 2.0 * (ctx.xm * ctx.alpha / ctx.omega) ** 2
    a = 4.0 * _SQRT_PI * ctx.aw * eps
    if a >= 1.0:
        return TermEstimate(1, eps, M_SERIES_B0_ACCELERATED)
    ln_a = math.log(a)
    s = -2.0 * ln_a / (math.e * math.sqrt(2.0 * m) * ctx.omega)
    n = max(1, math.ceil(-ln_a / (2.0 * lambert_w0_exact(s))))
    return TermEstimate(n, eps, M_SERIES_B0_ACCELERATED)


def _accel_attempt(ctx: B0Context, n: int, eps: float):
    """One evaluation of the accelerated identity at truncation n.

    Returns (value, abs_err_estimate); the error estimate combines the
    2F1 tail with the cancellation floor of the alternating S_P sum.
    When the rigorous bound certifies the plain partial sums alone, the
    re-expanded remainder is skipped entirely.
    """
    xm, alpha, om, delta = ctx.xm, ctx.alpha, ctx.omega, ctx.delta
    aw = ctx.aw
    m = 2.0 * (xm * alpha / om) ** 2
    # 1 - m/(2 alpha^2) == (delta/omega)^2 algebraically; the direct form
    # keeps full relative accuracy when x - mu dominates omega
    z2f1 = (delta / om) ** 2
    pref = (delta / math.pi) * xm * alpha / om   # with e^{da} folded via `fuse`
    fuse = ctx.ad - aw

    # partial sums of the plain series, fused with scaled Bessel
    pair = bessel_k01(aw, scaled=True)
    r = pair.k1 / pair.k0
    t = pair.k1 * math.exp(fuse)
    zf = xm * xm * alpha / om
    tsum = 0.0
    for k in range(n):
        tsum += t
        r = 1.0 / r + 2.0 * (k + 1) / aw
        t = t * zf * r / (2.0 * k + 3.0)

    try:
        plain_bound = bound_remainder_b0_positive(ctx, n)
    except NonConvergence:
        plain_bound = math.inf
    if plain_bound <= 0.05 * eps:
        return 0.5 + pref * tsum, plain_bound

    # S_P: assemble in log space around the running maximum
    ln_pref_sp = (n * math.log(2.0 * m) - (2 * n + 1) * math.log(alpha)
                  - math.log(om * math.pi) + math.lgamma(n + 1.5)
                  - ((n + 1.0) * math.log(2.0) + math.lgamma(n + 1.5) - 0.5 * math.log(math.pi))
                  - (math.lgamma(2 * n + 1.0) - n * math.log(2.0) - math.lgamma(n + 1.0)))
    ln_terms = []
    signs = []
    noise_fac = []
    ln_aw2 = 2.0 * math.log(aw)
    for k in range(n + 1):
        f21, f21_cancel = _gauss_2f1_info(n + 1 - k, 1.5 - k, z2f1)
        ln_g_half = math.lgamma(k - 0.5) if k >= 1 else math.log(2.0 * _SQRT_PI)
        sign = 1.0 if k % 2 == 0 else -1.0
        if k == 0:
            sign = -sign  # Gamma(-1/2) = -2 sqrt(pi)
        val = k * ln_aw2 - math.lgamma(2 * k + 1.0) + math.lgamma(n + 1.0 - k) + ln_g_half
        if f21 < 0.0:
            sign = -sign
        ln_terms.append(val + math.log(abs(f21)) if f21 != 0.0 else -math.inf)
        signs.append(sign)
        noise_fac.append(max(1.0, f21_cancel))
    mx = max(ln_terms)
    sp_scaled = sum(sg * math.exp(lt - mx) for sg, lt in zip(signs, ln_terms))
    cancel_scaled = _EPS_MACH * sum(nf * math.exp(lt - mx)
                                    for nf, lt in zip(noise_fac, ln_terms))

    # S_Q: Gamma(n+3/2) 2^{n+1}/(2n+1)!! = sqrt(pi) exactly, and
    # omega^2 (2 alpha^2 - m)/2 = (alpha delta)^2, which collapses the
    # closed form to pi cosh(alpha delta) / (delta sqrt(2m))
    ln_sq = (math.log(math.pi) - math.log(delta) - 0.5 * math.log(2.0 * m)
             + ctx.ad + math.log1p(math.exp(-2.0 * ctx.ad)) - math.log(2.0))

    # combine S_P + S_Q at a common scale; both carry e^{delta alpha} to
    # match the fused partial sums
    ln_sp_scale = ln_pref_sp + mx
    m_all = max(ln_sp_scale, ln_sq)
    p_sp = sp_scaled * math.exp(ln_sp_scale - m_all)
    p_sq = math.exp(ln_sq - m_all)
    combined = p_sp + p_sq
    ln_rem = m_all + ctx.ad
    if ln_rem > 700.0:
        raise NonConvergence("accelerated remainder overflow")
    rem = combined * math.exp(ln_rem) if ln_rem > -745.0 else 0.0
    # error model: S_P internal cancellation at its term scale, plus the
    # S_P vs S_Q cancellation, plus double rounding of the partial sums
    noise_scaled = cancel_scaled + _EPS_MACH * (abs(p_sp) + p_sq) * math.exp(m_all - ln_sp_scale)
    ln_err = ln_sp_scale + ctx.ad
    err = noise_scaled * math.exp(ln_err) if -745.0 < ln_err <= 700.0 else (
        math.inf if ln_err > 700.0 else 0.0)
    value = 0.5 + pref * (tsum + rem)
    return value, abs(pref) * (err + 8.0 * _EPS_MACH * abs(tsum))


def series_b0_accelerated(ctx: B0Context, eps: float = 5e-13) -> Evaluation:
    """Plain series plus re-expanded remainder (terminating S_P and closed S_Q).

    The truncation point starts at the closed-form estimate; when the
    alternating S_P sum would lose more precision than eps through
    cancellation (large alpha-omega), the truncation is raised, which
    shifts weight back onto the plain convergent terms.
    """
    if ctx.xm == 0.0:
        return Evaluation(0.5, M_SERIES_B0_ACCELERATED, 0, 0.0)
    n = estimate_n_b0_accelerated(ctx, min(eps, _EPS_MACH)).n
    best = None
    for _ in range(8):
        if n > SERIES_CAP:
            break
        value, err = _accel_attempt(ctx, n, eps)
        if best is None or err < best[1]:
            best = (value, err, n)
        if err <= eps:
            return Evaluation(value, M_SERIES_B0_ACCELERATED, n, err)
        n = 2 * n + 8
    if best is None:
        raise NonConvergence("accelerated series cap exceeded")
    value, err, n = best
    return Evaluation(value, M_SERIES_B0_ACCELERATED, n, err, degraded=err > eps)


def asymptotic_b0_large_xm(ctx: B0Context, eps: float = 5e-13) -> Evaluation:
    """Alternating asymptotic expansion for x - mu -> -inf, optimally truncated.

    Accumulates in scaled (unfused) space; the deep-tail exponent is
    applied once at the end so terms never sink into subnormals.
    """
    from .series_xmu import _assemble_exp

    if ctx.xm >= 0.0:
        raise DomainViolation("asymptotic expansion requires x - mu < 0")
    aw = ctx.aw
    pair = bessel_k01(aw, scaled=True)
    fuse = ctx.ad - aw
    ln_pref = math.log(-ctx.delta / (math.pi * ctx.xm))
    fac = ctx.omega / (2.0 * ctx.xm * ctx.xm * ctx.alpha)
    r = pair.k1 / pair.k0           # K_1/K_0
    t = pair.k0                     # k = 0 term, scaled
    s = 0.0
    prev_at = math.inf
    rel = math.inf
    terms = 0
    for k in range(ASYMPTOTIC_CAP):
        at = abs(t)
        if at > prev_at:
            # divergence onset: truncate before this term; the first
            # neglected term bounds the remainder
            rel = at / max(abs(s), 1e-300)
            terms = k
            break
        s += t
        prev_at = at
        terms = k + 1
        # t_{k+1}/t_k = -2(2k+1) fac K_{k+1}/K_k
        t = t * (-2.0) * (2.0 * k + 1.0) * fac * r
        r = 1.0 / r + 2.0 * (k + 1) / aw
        if abs(t) <= 0.1 * eps * max(abs(s), 1e-300):
            rel = abs(t) / max(abs(s), 1e-300)
            break
    else:
        rel = abs(t) / max(abs(s), 1e-300)
    return _assemble_exp(s, fuse + ln_pref, rel, eps, M_ASYMPTOTIC_B0_LARGE_XM, terms)


def _ck_beta0(xm: float, r: float, kmax: int) -> list:
    """Saddle-expansion coefficients, simplified recurrence for beta = 0."""
    arg = xm / math.sqrt(r)
    c = [std_normal_cdf(arg), -xm / (2.0 * r ** 1.5) * std_normal_pdf(arg)]
    for k in range(2, kmax + 1):
        c.append(((k - 1) * (xm * xm - 4.0 * r * (k - 2) - 3.0 * r) * c[k - 1]
                  - (2.0 * (k - 2) ** 2 + (k - 2)) * c[k - 2]) / (2.0 * r * r * (k - 1) * k))
    return c


def uniform_b0_large_alpha(ctx: B0Context, k_max: int = UNIFORM_KMAX) -> Evaluation:
    """Uniform expansion for alpha -> inf in scaled Bessel space.

    The e^{delta alpha} prefactor cancels exactly against K_{1/2}(alpha
    delta), so Q_k is propagated as e^{2 zeta} Q_k with elementary seeds
    sqrt(pi)/zeta, 0, sqrt(pi)/2.
    """
    alpha, delta, xm = ctx.alpha, ctx.delta, ctx.xm
    zeta = 0.5 * ctx.ad
    r = delta / alpha
    c = _ck_beta0(xm, r, k_max)
    qs = _q_ladder(zeta, k_max)
    pref = ctx.ad / (2.0 * _SQRT_PI)
    s = 0.0
    scale = 1.0  # (2/alpha^2)^k
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
            # divergent tail (terms may oscillate in pairs before it):
            # fall back to the smallest-term prefix
            err = pref * min_at
            val = pref * best_s
            return Evaluation(val, M_UNIFORM_B0_LARGE_ALPHA, best_k, err,
                              degraded=err > 5e-13 * max(abs(val), 1e-300))
        s += term
        if 0.0 < at < min_at:
            min_at, best_s, best_k = at, s, k + 1
        if at <= _EPS_MACH * abs(s):
            tiny += 1
            if tiny >= 2:
                return Evaluation(pref * s, M_UNIFORM_B0_LARGE_ALPHA, k + 1,
                                  pref * at + _EPS_MACH * abs(pref * s))
        else:
            tiny = 0
        scale *= 2.0 / (alpha * alpha)
    raise NonConvergence("uniform expansion did not stabilize before k_max")


def beta0_auto(params: NigParams, x: float, eps: float = 5e-13) -> Evaluation:
    """Region selection for beta = 0, with quadrature fallback.

    Condition chain: convergent series on (C1 or C2) and delta >= 1,
    uniform expansion, asymptotic expansion (after reflection for the
    right tail), numerical integration otherwise.
    """
    from .quadrature import cdf_by_quadrature

    ctx = B0Context.make(params.alpha, params.delta, x, params.mu)
    xm, om, alpha, delta = ctx.xm, ctx.omega, ctx.alpha, ctx.delta
    if xm == 0.0:
        return Evaluation(0.5, M_EXACT_SYMMETRIC, 0, 0.0)
    try:
        c1 = abs(xm) <= 5.0 and alpha / om <= 0.25 and 0.5 * delta >= abs(xm)
        c2 = xm * xm <= 1.25 and alpha / om <= 1.0
        if (c1 or c2) and delta >= 1.0:
            ev = series_b0_positive(ctx, eps)
        elif xm * xm <= 2.5 and alpha >= 5.0 and delta >= 10.0 and ctx.ad >= 200.0:
            ev = uniform_b0_large_alpha(ctx)
        elif xm * xm >= 70.0 and alpha / om >= 1.0:
            if xm < 0.0:
                ev = asymptotic_b0_large_xm(ctx, eps)
            else:
                sub = asymptotic_b0_large_xm(ctx.reflected(), eps)
                ev = Evaluation(1.0 - sub.value, sub.method, sub.terms,
                                sub.err_estimate, sub.degraded)
        else:
            return cdf_by_quadrature(params, x, eps)
        if ev.degraded:
            q = cdf_by_quadrature(params, x, eps)
            return q if not q.degraded or q.err_estimate < ev.err_estimate else ev
        return ev.clamped()
    except (NonConvergence, DomainViolation):
        return cdf_by_quadrature(params, x, eps)


def _q_ladder(zeta: float, k_max: int) -> list:
    """Scaled kernel values Q*_k = e^{2 zeta} Q_k(zeta), k = 0..k_max.

    The three-term-in-three recurrence is badly unstable in doubles (the
    wanted solution is subdominant), so the ladder is run in exact
    rational arithmetic on q_k = Q*_k / sqrt(pi), whose seeds 1/zeta, 0,
    1/2 are exact.
    """
    from fractions import Fraction

    z = Fraction(zeta)
    half = Fraction(1, 2)
    q = [1 / z, Fraction(0), half]
    for k in range(1, max(k_max - 1, 1)):
        q.append((k + half - 2 * z) * q[k + 1] + z * (2 * k + half) * q[k]
                 + k * z * z * q[k - 1])
    return [_SQRT_PI * float(v) for v in q[:k_max + 1]]
