"""Double-precision normal inverse Gaussian CDF, SF and PDF.

Evaluation dispatches among convergent series, asymptotic and uniform
asymptotic expansions, and tanh-sinh quadrature of the Laplace-type
integral, selected per parameter region; every result carries its method
identifier, term count and error estimate.
"""

from .dispatcher import DEFAULT_EPS, cdf, cdf_value, pdf, sf, sf_value
from .result import (
    ALL_METHODS,
    DomainViolation,
    Evaluation,
    NigParams,
    NonConvergence,
    ParameterError,
    TermEstimate,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_METHODS", "DEFAULT_EPS", "DomainViolation", "Evaluation", "NigParams",
    "NonConvergence", "ParameterError", "TermEstimate",
    "cdf", "cdf_value", "pdf", "sf", "sf_value", "__version__",
]
