"""Methods for the centre point x = mu.

The symmetric case is exactly 1/2; otherwise two convergent series
families (an exponential-expansion form on half-integer Bessel orders
and the preferred integer-order form) plus the large-delta asymptotic
expansion, and the region router used by the dispatcher and by the
general-case Hermite series as their base value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .kernels import bessel_k01, bessel_k_half
from .result import (
    DomainViolation,
    Evaluation,
    M_ASYMPTOTIC_XMU_LARGE_DELTA,
    M_EXACT_SYMMETRIC,
    M_SERIES_XMU_EXP,
    M_SERIES_XMU_PHI,
    NigParams,
    NonConvergence,
)

_EPS_MACH = 2.0 ** -53
SERIES_CAP = 300
ASYMPTOTIC_CAP = 60


@dataclass(frozen=True)
class XmuContext:
    alpha: float
    beta: float
    delta: float
    gamma: float

    @classmethod
    def make(cls, alpha: float, beta: float, delta: float) -> "XmuContext":
        return cls(alpha, beta, delta, math.sqrt((alpha - beta) * (alpha + beta)))

    @classmethod
    def of(cls, params: NigParams) -> "XmuContext":
        return cls(params.alpha, params.beta, params.delta, params.gamma)

    def reflected(self) -> "XmuContext":
        return XmuContext(self.alpha, -self.beta, self.delta, self.gamma)


def xmu_exact_symmetric(ctx: XmuContext) -> float:
    """F(mu) for the symmetric distribution is exactly one half."""
    if ctx.beta != 0.0:
        raise DomainViolation("exact value only holds for beta = 0")
    return 0.5


def xmu_series_phi(ctx: XmuContext, eps: float = 5e-13) -> Evaluation:
    """Integer-order series, the production choice since alpha >= gamma.

    F(mu) = 1/2 + (delta e^{d g}/pi) sum_k (-beta)^{2k+1} (d/a)^k K_k(a d)/(2k+1)!!
    with the prefactor fused as e^{d g - a d} against scaled Bessel values.
    """
    if ctx.beta == 0.0:
        return Evaluation(0.5, M_SERIES_XMU_PHI, 0, 0.0)
    ad = ctx.alpha * ctx.delta
    fuse = ctx.delta * ctx.gamma - ad  # <= 0 since gamma <= alpha
    efac = math.exp(fuse) if fuse > -745.0 else 0.0
    if efac == 0.0:
        raise NonConvergence("series scale underflow (far outside region)")
    pair = bessel_k01(ad, scaled=True)
    r = pair.k1 / pair.k0          # K_1/K_0 at ad
    t = pair.k0 * efac             # k = 0 term carries K_0
    zf = ctx.beta * ctx.beta * ctx.delta / ctx.alpha
    ratio_inf = (ctx.beta / ctx.alpha) ** 2
    pref = -(ctx.delta / math.pi) * ctx.beta
    apref = abs(pref)
    s = 0.0
    for k in range(SERIES_CAP):
        s += t
        t = t * zf * r / (2.0 * k + 3.0)
        r = 1.0 / r + 2.0 * (k + 1) / ad
        obs = abs(t * zf * r / (2.0 * k + 5.0)) / abs(t) if t != 0.0 else 0.0
        c = max(obs, ratio_inf)
        if c < 1.0:
            rem = apref * abs(t) / (1.0 - c)
            if rem <= 0.1 * eps * max(abs(0.5 + pref * s), 1e-300):
                return Evaluation(0.5 + pref * s, M_SERIES_XMU_PHI, k + 1, rem)
        if t == 0.0:
            return Evaluation(0.5 + pref * s, M_SERIES_XMU_PHI, k + 1, apref * 1e-300)
    raise NonConvergence("x=mu series cap exceeded (beta near alpha)")


def xmu_series_phi_alternating(ctx: XmuContext, eps: float = 5e-13) -> Evaluation:
    """Diagnostic companion with Bessel argument gamma*delta (alternating)."""
    if ctx.beta == 0.0:
        return Evaluation(0.5, M_SERIES_XMU_PHI, 0, 0.0)
    gd = ctx.gamma * ctx.delta
    pair = bessel_k01(gd, scaled=True)  # e^{d g} K_k(g d): fused exactly
    r = pair.k1 / pair.k0
    t = pair.k0
    zf = ctx.beta * ctx.beta * ctx.delta / (2.0 * ctx.gamma)
    pref = -(ctx.delta / math.pi) * ctx.beta
    apref = abs(pref)
    s = 0.0
    last = math.inf
    for k in range(SERIES_CAP):
        s += t
        t = t * (-zf) * r / (k + 1.0) * (2.0 * k + 1.0) / (2.0 * k + 3.0)
        r = 1.0 / r + 2.0 * (k + 1) / gd
        at = abs(t)
        if at < last and apref * at <= 0.1 * eps * max(abs(0.5 + pref * s), 1e-300):
            return Evaluation(0.5 + pref * s, M_SERIES_XMU_PHI, k + 1, apref * at)
        last = at
    raise NonConvergence("alternating x=mu series cap exceeded")


def xmu_series_exp(ctx: XmuContext, eps: float = 5e-13) -> Evaluation:
    """Exponential-expansion series over half-integer Bessel orders.

    Sums sqrt(a d/2 pi) e^{d g} sum_k (-b)^k (d/a)^{k/2} K_{(k-1)/2}(a d)
    / (2^{k/2} Gamma(k/2+1)) for beta < 0; the 1 - (+beta) companion
    otherwise, per the cancellation note.
    """
    if ctx.beta == 0.0:
        return Evaluation(0.5, M_SERIES_XMU_EXP, 0, 0.0)
    a, b, d = ctx.alpha, ctx.beta, ctx.delta
    ad = a * d
    flip = b > 0.0
    bb = abs(b)  # sum runs over (-beta)^k = bb^k when beta < 0; companion otherwise
    fuse = d * ctx.gamma - ad
    pref = math.sqrt(ad / (2.0 * math.pi))
    if fuse < -745.0:
        return Evaluation(1.0 if flip else 0.5, M_SERIES_XMU_EXP, 1, 1e-300)
    # interleaved scaled ladders: K_{h+1/2}(ad) for even k, K_j(ad) for odd k
    pair = bessel_k01(ad, scaled=True)
    k_int = [pair.k0, pair.k1]
    k_half = [bessel_k_half(0, ad, scaled=True), bessel_k_half(1, ad, scaled=True)]
    ln_root = math.log(bb) + 0.5 * (math.log(d) - math.log(2.0 * a))
    s = 0.0
    tiny = 0
    terms = 0
    term = 0.0
    for k in range(SERIES_CAP):
        if k % 2 == 0:
            h = max(k // 2 - 1, 0)   # order (k-1)/2 = h + 1/2 via |K_{-1/2}| = K_{1/2}
            while len(k_half) <= h:
                nu = len(k_half) - 1.5  # recurrence at order nu+1 = len-1/2
                k_half.append(k_half[-2] + (2.0 * (nu + 1.0) / ad) * k_half[-1])
            kv = k_half[h]
        else:
            j = (k - 1) // 2
            while len(k_int) <= j:
                nu = len(k_int) - 1
                k_int.append(k_int[-2] + (2.0 * nu / ad) * k_int[-1])
            kv = k_int[j]
        if not math.isfinite(kv) or kv > 1e290:
            raise NonConvergence("exp-expansion ladder overflow")
        ln_t = k * ln_root - math.lgamma(0.5 * k + 1.0) + math.log(kv) + fuse
        term = math.exp(ln_t) if ln_t > -745.0 else 0.0
        s += term
        terms = k + 1
        if term <= 0.25 * _EPS_MACH * s:
            tiny += 1
            if tiny >= 2:
                break
        else:
            tiny = 0
    else:
        raise NonConvergence("exp-expansion series cap exceeded")
    val = pref * s
    err = pref * term * 4.0 + _EPS_MACH * abs(val)
    if flip:
        return Evaluation(1.0 - val, M_SERIES_XMU_EXP, terms, err)
    return Evaluation(val, M_SERIES_XMU_EXP, terms, err)


def xmu_asymptotic_large_delta(ctx: XmuContext, eps: float = 5e-13) -> Evaluation:
    """Asymptotic expansion for large delta, beta > 0, optimally truncated.

    Terms are accumulated in scaled (unfused) space and the exponent
    delta gamma - alpha delta, which reaches thousands below zero inside
    the dispatch region, is applied once at the end in log space; values
    that land below the full-precision floor are flagged degraded.
    """
    if ctx.beta <= 0.0:
        raise DomainViolation("requires beta > 0 (reflect first)")
    a, b, d = ctx.alpha, ctx.beta, ctx.delta
    ad = a * d
    fuse = d * ctx.gamma - ad
    ln_pref = math.log(a / (math.pi ** 1.5 * b))
    pair = bessel_k01(ad, scaled=True)
    r = pair.k1 / pair.k0
    t = math.sqrt(math.pi) * pair.k1   # Gamma(1/2) K*_1
    fac = -2.0 * a / (b * b * d)
    s = 0.0
    rel = math.inf
    prev_at = math.inf
    terms = 0
    for k in range(ASYMPTOTIC_CAP):
        at = abs(t)
        if at > prev_at:
            rel = at / max(abs(s), 1e-300)
            terms = k
            break
        s += t
        prev_at = at
        terms = k + 1
        r = 1.0 / r + 2.0 * (k + 1) / ad
        t = t * (k + 0.5) * fac * r
        if abs(t) <= 0.1 * eps * max(abs(s), 1e-300):
            rel = abs(t) / max(abs(s), 1e-300)
            break
    else:
        rel = abs(t) / max(abs(s), 1e-300)
    return _assemble_exp(s, fuse + ln_pref, rel, eps,
                         M_ASYMPTOTIC_XMU_LARGE_DELTA, terms)


# values whose magnitude drops below e^-689 cannot carry full double
# precision (the last factor lands in or next to the subnormal range)
_LN_PRECISION_FLOOR = -689.0


def _assemble_exp(s: float, ln_scale: float, rel_err: float, eps: float,
                  method: str, terms: int) -> Evaluation:
    if s == 0.0:
        return Evaluation(0.0, method, terms, 0.0, degraded=True)
    ln_val = ln_scale + math.log(abs(s))
    sub_floor = ln_val < _LN_PRECISION_FLOOR
    value = math.copysign(math.exp(ln_val), s) if ln_val > -745.0 else 0.0
    err = abs(value) * rel_err + (abs(value) * 1e-6 if sub_floor else 0.0)
    degraded = sub_floor or rel_err > eps
    return Evaluation(value, method, terms, err, degraded=degraded)


def xmu_auto(params: NigParams, eps: float = 5e-13) -> Evaluation:
    """Region selection at x = mu, with quadrature fallback."""
    from .quadrature import cdf_by_quadrature

    if params.beta == 0.0:
        return Evaluation(0.5, M_EXACT_SYMMETRIC, 0, 0.0)
    ctx = XmuContext.of(params)
    a, b, d = params.alpha, params.beta, params.delta
    try:
        if a <= 10.0 and d <= 10.0 and abs(b) <= 1.5 and abs(b) / a <= 0.9:
            ev = xmu_series_phi(ctx, eps)
        elif abs(b) / a >= 0.75 and a * d >= 300.0 and d >= 15.0:
            if b > 0.0:
                ev = xmu_asymptotic_large_delta(ctx, eps)
            else:
                sub = xmu_asymptotic_large_delta(ctx.reflected(), eps)
                ev = Evaluation(1.0 - sub.value, sub.method, sub.terms,
                                sub.err_estimate, sub.degraded)
        else:
            return cdf_by_quadrature(params, params.mu, eps)
        if ev.degraded:
            q = cdf_by_quadrature(params, params.mu, eps)
            return q if not q.degraded or q.err_estimate < ev.err_estimate else ev
        return ev.clamped()
    except (NonConvergence, DomainViolation):
        return cdf_by_quadrature(params, params.mu, eps)
