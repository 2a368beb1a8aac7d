"""Shared value types: validated parameters, evaluation records, signals."""

from __future__ import annotations

import math
from dataclasses import dataclass


class ParameterError(ValueError):
    """Distribution parameters outside the admissible domain."""


class DomainViolation(ValueError):
    """A method was invoked outside the region where it is defined."""


class NonConvergence(RuntimeError):
    """A method hit its term cap or lost precision; caller should fall back."""


# method identifiers reported in Evaluation.method
M_LIMIT = "limit"
M_EXACT_SYMMETRIC = "exact-symmetric"
M_SERIES_B0_POSITIVE = "series-b0-positive"
M_SERIES_B0_ALTERNATING = "series-b0-alternating"
M_SERIES_B0_ACCELERATED = "series-b0-accelerated"
M_ASYMPTOTIC_B0_LARGE_XM = "asymptotic-b0-large-xm"
M_UNIFORM_B0_LARGE_ALPHA = "uniform-b0-large-alpha"
M_SERIES_XMU_EXP = "series-xmu-exp"
M_SERIES_XMU_PHI = "series-xmu-phi"
M_ASYMPTOTIC_XMU_LARGE_DELTA = "asymptotic-xmu-large-delta"
M_SERIES_GENERAL_BESSEL_AK = "series-general-bessel-ak"
M_SERIES_GENERAL_HERMITE_XMU = "series-general-hermite-xmu"
M_SERIES_GENERAL_HERMITE_BETA = "series-general-hermite-beta"
M_ASYMPTOTIC_GENERAL_LARGE_DELTA = "asymptotic-general-large-delta"
M_ASYMPTOTIC_GENERAL_LARGE_XM = "asymptotic-general-large-xm"
M_UNIFORM_GENERAL_LARGE_GAMMA = "uniform-general-large-gamma"
M_QUADRATURE = "quadrature"

ALL_METHODS = (
    M_LIMIT, M_EXACT_SYMMETRIC,
    M_SERIES_B0_POSITIVE, M_SERIES_B0_ALTERNATING, M_SERIES_B0_ACCELERATED,
    M_ASYMPTOTIC_B0_LARGE_XM, M_UNIFORM_B0_LARGE_ALPHA,
    M_SERIES_XMU_EXP, M_SERIES_XMU_PHI, M_ASYMPTOTIC_XMU_LARGE_DELTA,
    M_SERIES_GENERAL_BESSEL_AK, M_SERIES_GENERAL_HERMITE_XMU,
    M_SERIES_GENERAL_HERMITE_BETA, M_ASYMPTOTIC_GENERAL_LARGE_DELTA,
    M_ASYMPTOTIC_GENERAL_LARGE_XM, M_UNIFORM_GENERAL_LARGE_GAMMA,
    M_QUADRATURE,
)

# gamma below this is indistinguishable from a degenerate distribution in doubles
_GAMMA_FLOOR = 1e-150


@dataclass(frozen=True)
class NigParams:
    """Distribution parameters: 0 <= |beta| < alpha, delta > 0, mu real."""

    alpha: float
    beta: float
    mu: float
    delta: float

    def __post_init__(self):
        a, b, m, d = self.alpha, self.beta, self.mu, self.delta
        for name, v in (("alpha", a), ("beta", b), ("mu", m), ("delta", d)):
            if not math.isfinite(v):
                raise ParameterError(f"{name} must be finite, got {v!r}")
        if a <= 0:
            raise ParameterError(f"alpha must be positive, got {a!r}")
        if abs(b) >= a:
            raise ParameterError(f"|beta| must be < alpha, got beta={b!r}, alpha={a!r}")
        if d <= 0:
            raise ParameterError(f"delta must be positive, got {d!r}")
        if self.gamma < _GAMMA_FLOOR:
            raise ParameterError(
                f"alpha^2 - beta^2 underflows (gamma={self.gamma!r}); "
                "distribution is degenerate at double precision")

    @property
    def gamma(self) -> float:
        # sqrt((a-b)(a+b)) avoids cancellation when beta -> +-alpha
        return math.sqrt((self.alpha - self.beta) * (self.alpha + self.beta))


@dataclass
class Evaluation:
    """One CDF evaluation: value plus provenance and accuracy bookkeeping.

    ``degraded`` is False only when ``err_estimate`` met the requested
    tolerance; expansions also use it as their below-target flag so the
    dispatcher can retry with quadrature.
    """

    value: float
    method: str
    terms: int = 0
    err_estimate: float = 0.0
    degraded: bool = False

    def clamped(self) -> "Evaluation":
        v = min(1.0, max(0.0, self.value))
        if v != self.value:
            return Evaluation(v, self.method, self.terms, self.err_estimate, self.degraded)
        return self


@dataclass
class TermEstimate:
    """Predicted number of series terms for a target accuracy."""

    n: int
    predicted_error: float
    method: str = ""
