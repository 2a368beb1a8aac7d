"""Public API: cdf, sf, pdf with region dispatch and provenance.

Routing: the symmetric and centre-point special cases go through their
own condition chains; everything else runs the general-case chain.  The
asymptotic branches receive reflected inputs where their sign
preconditions require it (the reflection site lives here, once).  Any
non-convergence signal or below-target result falls back to quadrature
exactly once; ``degraded`` survives only if quadrature also failed to
certify the target.
"""

from __future__ import annotations

import math

from .kernels import bessel_k01
from .quadrature import cdf_by_quadrature
from .result import (
    Evaluation,
    M_LIMIT,
    NigParams,
    NonConvergence,
    DomainViolation,
    ParameterError,
)
from .series_beta0 import beta0_auto
from .series_general import (
    GeneralContext,
    general_asymptotic_large_delta,
    general_asymptotic_large_xm,
    general_series_bessel_ak,
    general_series_hermite_beta,
    general_series_hermite_xmu,
)
from .series_xmu import xmu_auto

DEFAULT_EPS = 5e-13


def _check_x(x: float) -> None:
    if x != x:
        raise ParameterError("x must not be NaN")


def _reflected(params: NigParams) -> NigParams:
    return NigParams(params.alpha, -params.beta, -params.mu, params.delta)


def _general(params: NigParams, x: float, eps: float) -> Evaluation:
    """Condition chain for the general case."""
    ctx = GeneralContext.make(params, x)
    xm, a, b, d, g = ctx.xm, ctx.alpha, ctx.beta, ctx.delta, ctx.gamma
    om = ctx.omega
    ab = abs(b)
    if (ab <= 1.0 and g >= 1.5) or (ab <= 0.5 and g >= 0.75):
        return general_series_hermite_beta(ctx, eps)
    if xm * xm <= 2.25 and d >= 2.5:
        return general_series_hermite_xmu(ctx, eps)
    if xm * xm <= 3.0 and d >= 1.0 and ab <= 1.5 and g >= 0.75:
        return general_series_bessel_ak(ctx, eps)
    if xm * xm <= 20.0 and a >= 5.0 and ab / a >= 0.5 and d >= 15.0:
        if b > 0.0:
            return general_asymptotic_large_delta(ctx, eps)
        sub = general_asymptotic_large_delta(ctx.reflected(), eps)
        return Evaluation(1.0 - sub.value, sub.method, sub.terms,
                          sub.err_estimate, sub.degraded)
    if (xm * xm >= 100.0 and a / om >= 0.25 and g >= 10.0 and d <= 10.0
            and (ab == 0.0 or a / ab >= 5.0)):
        if xm < 0.0:
            return general_asymptotic_large_xm(ctx, eps)
        sub = general_asymptotic_large_xm(ctx.reflected(), eps)
        return Evaluation(1.0 - sub.value, sub.method, sub.terms,
                          sub.err_estimate, sub.degraded)
    return cdf_by_quadrature(params, x, eps)


def cdf(params: NigParams, x: float, eps: float = DEFAULT_EPS) -> Evaluation:
    """Cumulative distribution function with method provenance."""
    _check_x(x)
    if x == math.inf:
        return Evaluation(1.0, M_LIMIT, 0, 0.0)
    if x == -math.inf:
        return Evaluation(0.0, M_LIMIT, 0, 0.0)
    if params.beta == 0.0:
        ev = beta0_auto(params, x, eps)   # has its own quadrature fallback
        return ev.clamped()
    if x == params.mu:
        ev = xmu_auto(params, eps)
        return ev.clamped()
    try:
        ev = _general(params, x, eps)
    except (NonConvergence, DomainViolation):
        ev = cdf_by_quadrature(params, x, eps)
    if ev.degraded and ev.method != "quadrature":
        q = cdf_by_quadrature(params, x, eps)
        if not q.degraded or q.err_estimate < ev.err_estimate:
            ev = q
    return ev.clamped()


def sf(params: NigParams, x: float, eps: float = DEFAULT_EPS) -> Evaluation:
    """Survival function, computed as the reflected CDF (never 1 - cdf)."""
    _check_x(x)
    if x == math.inf:
        return Evaluation(0.0, M_LIMIT, 0, 0.0)
    if x == -math.inf:
        return Evaluation(1.0, M_LIMIT, 0, 0.0)
    return cdf(_reflected(params), -x, eps)


def pdf(params: NigParams, x: float) -> float:
    """Density (alpha delta / pi) K1(alpha omega)/omega e^{delta gamma + beta (x-mu)}.

    The exponent delta gamma + beta (x-mu) - alpha omega is <= 0 for all
    admissible parameters (Cauchy-Schwarz), so the scaled Bessel form
    cannot overflow.
    """
    _check_x(x)
    if x == math.inf or x == -math.inf:
        return 0.0
    xm = x - params.mu
    om = math.hypot(xm, params.delta)
    aw = params.alpha * om
    expo = params.delta * params.gamma + params.beta * xm - aw
    if expo < -745.0:
        return 0.0
    pair = bessel_k01(aw, scaled=True)
    return (params.alpha * params.delta / (math.pi * om)) * pair.k1 * math.exp(expo)


def cdf_value(params: NigParams, x: float, eps: float = DEFAULT_EPS) -> float:
    return cdf(params, x, eps).value


def sf_value(params: NigParams, x: float, eps: float = DEFAULT_EPS) -> float:
    return sf(params, x, eps).value
