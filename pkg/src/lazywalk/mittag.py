"""The Mittag-Leffler moment family.

The scaled position H_n / n^p converges to a random variable whose
moment generating function is the series sum_k lambda^k / Gamma(1 + k p)
and whose k-th moment is k! / Gamma(1 + k p).  Special cases: p = 0 is
the unit-mean exponential, p = 1/2 relates to the standard half-normal,
p = 1 is a point mass at 1.  Only the series form is evaluated here; the
general density (via one-sided stable laws) is out of scope.
"""

import math
from dataclasses import dataclass

LAMBDA_CAP = 30.0


@dataclass(frozen=True)
class MLParams:
    p: float
    series_tol: float = 1e-16
    max_terms: int = 4000

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must be in [0,1], got {self.p}")
        if self.series_tol <= 0.0:
            raise ValueError("series_tol must be positive")


def ml_function(params: MLParams, lam: float) -> float:
    """Truncated series sum_k lam^k / Gamma(1 + k p).

    Stops when a term drops below series_tol relative to the partial sum.
    Restricted to |lam| <= 30; raises if max_terms is exhausted without
    convergence, which happens for p = 0 with |lam| >= 1 (geometric series
    at or past its radius) and for small p with lam large enough that the
    value exp(lam^(1/p)) leaves double range -- the peak term sits near
    index lam^(1/p) / p, so the budget runs out before the tail decays.
    """
    if abs(lam) > LAMBDA_CAP:
        raise ValueError(f"|lambda| must be <= {LAMBDA_CAP}, got {lam}")
    if lam == 0.0:
        return 1.0
    # terms in log space: lam^k / Gamma(1 + k p) under- and overflows long
    # before the sum does
    log_abs_lam = math.log(abs(lam))
    partial = 1.0  # k = 0 term
    for k in range(1, params.max_terms + 1):
        log_term = k * log_abs_lam - math.lgamma(1.0 + k * params.p)
        term = math.exp(log_term) if log_term < 709.0 else math.inf
        if lam < 0.0 and k % 2 == 1:
            term = -term
        partial += term
        if abs(term) < params.series_tol * abs(partial):
            return partial
    raise ArithmeticError(
        f"series did not converge within {params.max_terms} terms "
        f"(p={params.p}, lambda={lam})"
    )


def ml_moment(p: float, k: int) -> float:
    """k-th moment, k! / Gamma(1 + k p)."""
    if k < 1:
        raise ValueError(f"order k must be >= 1, got {k}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0,1], got {p}")
    return math.factorial(k) / math.gamma(1.0 + k * p)


def half_normal_pdf(x: float) -> float:
    """Density sqrt(2/pi) exp(-x^2/2) of the standard half-normal; this is
    the p = 1/2 member of the family."""
    if x < 0.0:
        raise ValueError(f"x must be >= 0, got {x}")
    return math.sqrt(2.0 / math.pi) * math.exp(-0.5 * x * x)
