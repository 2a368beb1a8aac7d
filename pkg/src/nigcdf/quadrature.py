"""Backup evaluator: truncated Laplace integral + tanh-sinh quadrature.

The CDF integral over (0, inf) is truncated at a point N chosen from the
analytic tail bound (closed form through the principal Lambert branch),
the integrand magnitude is normalized by its saddle-point value so the
quadrature only ever sees O(1) numbers, and the truncated integral is
computed with level-doubling double-exponential quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .kernels import (
    lambert_w0_approx,
    lambert_w0_ln,
    lambert_wm1_approx,
    log_std_normal_cdf,
    normal_hazard,
)
from .result import Evaluation, M_QUADRATURE, NigParams

_LN_2PI_HALF = 0.5 * math.log(2.0 * math.pi)
_HALF_PI = 0.5 * math.pi

DEFAULT_MAX_LEVELS = 12
DEFAULT_EPS_ABS = 1e-15


@dataclass(frozen=True)
class QuadratureSpec:
    """Truncation and magnitude data for one CDF integral."""

    n_upper: float
    t0: float
    log_magnitude: float
    eps_abs: float = DEFAULT_EPS_ABS
    max_levels: int = DEFAULT_MAX_LEVELS


@dataclass
class QuadratureResult:
    value: float
    levels_used: int
    nodes_used: int
    err_estimate: float
    converged: bool = True


# ---------------------------------------------------------------------------
# Node tables.  For level 0 the trapezoidal step is 1; level L adds the odd
# multiples of 2^-L.  Nodes are stored as (t, weight_factor, endpoint_fraction)
# for t > 0; symmetry supplies t < 0.  endpoint_fraction is the distance of
# the mapped abscissa from the nearer interval endpoint, as a fraction of the
# interval length, kept separate so callers never lose precision to 1-x
# cancellation near the endpoints.
# ---------------------------------------------------------------------------

_node_cache: dict = {}

# node tables run until the weight is ~eps^2 so integrable endpoint
# singularities (x^-1/2 and friends) still converge to full precision
_NODE_TAU = 1e-35


def _jmax_for(h: float) -> int:
    # solve h * pi * s * exp(-pi*s/2) = tau for the largest s = e^t
    w = lambert_wm1_approx(-_NODE_TAU / (2.0 * h))
    s = -2.0 / math.pi * w
    return max(1, int(math.log(s) / h) + 1)


def _level_nodes(level: int):
    """Positive-t nodes for one refinement level (cached, write-once)."""
    got = _node_cache.get(level)
    if got is not None:
        return got
    h = 0.5 ** level
    jmax = _jmax_for(h)
    ts = []
    ws = []
    fr = []
    js = range(1, jmax + 1, 2) if level > 0 else range(0, jmax + 1)
    for j in js:
        t = j * h
        sh = math.sinh(t)
        q = math.exp(-math.pi * sh)          # -> 0 for large t
        sig = q / (1.0 + q)                  # fraction from upper endpoint
        w = _HALF_PI * math.cosh(t) * 4.0 * q / (1.0 + q) ** 2
        if w < _NODE_TAU and j > 2:
            break
        ts.append(t)
        ws.append(w)
        fr.append(sig)
    entry = (tuple(ts), tuple(ws), tuple(fr))
    _node_cache[level] = entry
    return entry


def tanh_sinh(integrand, a: float, b: float, eps: float = DEFAULT_EPS_ABS,
              max_levels: int = DEFAULT_MAX_LEVELS) -> QuadratureResult:
    """Integrate over (a, b) with level-doubling tanh-sinh quadrature.

    ``eps`` is a relative target (with a tiny absolute floor so that
    all-zero integrands terminate); the error estimate is the difference
    of the last two levels.  Endpoint singularities are admitted: the
    integrand is never evaluated exactly at a or b.
    """
    if not b > a:
        raise ValueError("tanh_sinh requires b > a")
    half = 0.5 * (b - a)
    nodes_used = 0
    total = 0.0
    prev = math.inf
    err = math.inf
    level = 0
    for level in range(max_levels + 1):
        h = 0.5 ** level
        ts, ws, fr = _level_nodes(level)
        acc = 0.0
        if level == 0:
            # center node j=0 is in the table with fraction 1/2
            for t, w, sig in zip(ts, ws, fr):
                d = (b - a) * sig
                if t == 0.0:
                    acc += w * integrand(a + half)
                    continue
                up = integrand(b - d)
                lo = integrand(a + d)
                acc += w * (up + lo)
            total = h * half * acc
        else:
            for t, w, sig in zip(ts, ws, fr):
                d = (b - a) * sig
                acc += w * (integrand(b - d) + integrand(a + d))
            total = 0.5 * total + h * half * acc
        nodes_used += 2 * len(ts)
        if level >= 1:
            err_new = abs(total - prev)
            target = eps * abs(total) + 1e-300
            # accept only when the level-to-level differences are also
            # shrinking geometrically, otherwise a slowly converging
            # integral can fool the plain difference test
            if err_new <= target and (err_new == 0.0 or (level >= 2 and err_new <= 0.3 * err)):
                return QuadratureResult(total, level, nodes_used, err_new, True)
            err = err_new
        prev = total
    return QuadratureResult(total, level, nodes_used, err, False)


# ---------------------------------------------------------------------------
# NIG integrand machinery
# ---------------------------------------------------------------------------


def _log_integrand(params: NigParams, x: float):
    """Returns g(t) = log of the Phi-form integrand (prefactor excluded)."""
    xm = x - params.mu
    beta = params.beta
    d2 = params.delta * params.delta
    g2 = params.gamma * params.gamma

    def g(t: float) -> float:
        rt = math.sqrt(t)
        u = (xm - beta * t) / rt
        return log_std_normal_cdf(u) - d2 / (2.0 * t) - 0.5 * g2 * t - 1.5 * math.log(t)

    return g


def saddle_point(params: NigParams, x: float):
    """Maximizer t0 of the log-integrand and g(t0).

    Starts from the closed-form quadratic estimate (the gamma-delta form
    for x - mu > 0, the alpha-omega form otherwise) and refines with
    Newton on g'(t) to absolute step 1e-4, at most 10 iterations.
    Returns (t0, log_magnitude, refined_flag).
    """
    xm = x - params.mu
    beta = params.beta
    gam = params.gamma
    delta = params.delta
    alpha = params.alpha
    d2 = delta * delta
    g2 = gam * gam

    om = math.hypot(xm, delta)
    t_gd = (-1.5 + math.sqrt(2.25 + (gam * delta) ** 2)) / g2
    t_aw = (-1.5 + math.sqrt(2.25 + (alpha * om) ** 2)) / (alpha * alpha)
    if xm > 0.0:
        # the gamma-delta quadratic ignores the Phi factor, which is only
        # safe while Phi is O(1) near its saddle; otherwise the alpha-omega
        # form models the suppressed tail
        g_fn = _log_integrand(params, x)
        t = t_gd if g_fn(t_gd) >= g_fn(t_aw) else t_aw
    else:
        t = t_aw

    def gp_gpp(t):
        rt = math.sqrt(t)
        u = (xm - beta * t) / rt
        h = normal_hazard(u)
        up = -0.5 * (xm / (t * rt) + beta / rt)
        upp = 0.75 * xm / (t * t * rt) + 0.25 * beta / (t * rt)
        gp = d2 / (2.0 * t * t) - 0.5 * g2 - 1.5 / t + up * h
        hp = -u * h - h * h
        gpp = -d2 / (t ** 3) + 1.5 / (t * t) + upp * h + up * up * hp
        return gp, gpp

    t0 = t
    refined = False
    for _ in range(10):
        gp, gpp = gp_gpp(t0)
        if gpp == 0.0 or not math.isfinite(gpp):
            break
        step = gp / gpp
        t_new = t0 - step
        while t_new <= 0.0:
            step *= 0.5
            t_new = t0 - step
        moved = abs(t_new - t0)
        t0 = t_new
        if moved <= 1e-4:
            refined = True
            break
    if not refined:
        t0 = t  # fall back to the closed-form estimate

    g = _log_integrand(params, x)
    return t0, g(t0), refined


_LN_VALID = 0.5 * math.log(27.0 * math.pi / 2.0)


def truncation_point(params: NigParams, eps: float, log_magnitude: float) -> float:
    """Upper limit N with analytic tail bound below the target.

    Solves 2 e^{-gamma^2 N / 2} / (N^{3/2} gamma^2) = eps' / C in closed
    form via the principal Lambert branch, everything assembled in log
    space.  eps' carries the saddle magnitude for relative targeting and
    C = delta e^{delta gamma} / sqrt(2 pi).
    """
    if not eps > 0.0:
        raise ValueError("eps must be positive")
    gam = params.gamma
    g2 = gam * gam
    ln_c = math.log(params.delta) + params.delta * gam - _LN_2PI_HALF
    ln_eps_eff = math.log(eps) + min(log_magnitude, 0.0)
    # u = (gamma^2 eps' / (2C))^(2/3)
    ln_u = (2.0 / 3.0) * (math.log(g2) + ln_eps_eff - math.log(2.0) - ln_c)
    ln_arg = math.log(g2 / 3.0) - ln_u
    # cheap upper-bound W when the validity inequality allows it
    valid = math.log(params.delta * gam) + params.delta * gam > _LN_VALID + ln_eps_eff
    if valid and 0.0 < ln_arg < 700.0:
        w = lambert_w0_approx(math.exp(ln_arg))
    else:
        w = lambert_w0_ln(ln_arg) if ln_arg >= 1.0 else lambert_w0_ln(max(ln_arg, -700.0))
    n = 3.0 / g2 * w
    return max(n, 1e-8)


def quadrature_spec(params: NigParams, x: float, eps: float) -> QuadratureSpec:
    t0, g0, _ = saddle_point(params, x)
    n = truncation_point(params, eps, g0)
    if n <= t0:
        n = 4.0 * t0
    return QuadratureSpec(n, t0, g0, eps, DEFAULT_MAX_LEVELS)


def cdf_by_quadrature(params: NigParams, x: float, eps: float = 5e-13) -> Evaluation:
    """CDF as C * I_N with the integrand evaluated as e^{g(t) - g(t0)}.

    The truncated interval is split at the saddle point (and one decade
    either side) so the possibly narrow peak always sits at segment
    endpoints, where the double-exponential nodes cluster.
    """
    spec = quadrature_spec(params, x, eps / 16.0)
    g = _log_integrand(params, x)
    g0 = spec.log_magnitude

    def f(t: float) -> float:
        val = g(t) - g0
        if val < -745.0:
            return 0.0
        return math.exp(val)

    t0, n_up = spec.t0, spec.n_upper
    cuts = sorted({0.0, t0 / 8.0, t0, min(8.0 * t0, n_up), n_up})
    cuts = [c for c in cuts if 0.0 <= c <= n_up]
    total = 0.0
    nodes = 0
    err = 0.0
    converged = True
    for lo, hi in zip(cuts, cuts[1:]):
        if hi <= lo:
            continue
        res = tanh_sinh(f, lo, hi, eps=eps / 16.0, max_levels=spec.max_levels)
        total += res.value
        nodes += res.nodes_used
        err += res.err_estimate
        converged = converged and res.converged
    ln_c = math.log(params.delta) + params.delta * params.gamma - _LN_2PI_HALF
    if total > 0.0:
        # the a-priori tail target was eps * e^{g0} in CDF units; when the
        # CDF comes out much smaller than e^{g0}, retarget relative to the
        # computed value and integrate the extension of the interval
        ln_f = ln_c + g0 + math.log(total)
        if ln_f < min(g0, 0.0) - 1.0 and ln_f > -700.0:
            n_ext = truncation_point(params, eps / 16.0, ln_f)
            if n_ext > 1.05 * n_up:
                res = tanh_sinh(f, n_up, n_ext, eps=eps / 16.0,
                                max_levels=spec.max_levels)
                total += res.value
                nodes += res.nodes_used
                err += res.err_estimate
                converged = converged and res.converged
    if total <= 0.0:
        value = 0.0
        rel = eps
    else:
        ln_f = ln_c + g0 + math.log(total)
        value = math.exp(ln_f) if ln_f > -745.0 else 0.0
        rel = err / total
    ev = Evaluation(
        value=value,
        method=M_QUADRATURE,
        terms=nodes,
        err_estimate=(rel + 0.25 * eps) * value,
        degraded=not converged,
    )
    return ev.clamped()
