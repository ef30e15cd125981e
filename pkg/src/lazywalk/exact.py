"""Closed-form and exact-distribution computations for the walk.

Everything here is deterministic: gamma-ratio sequences, the closed-form
factorial/raw moments of the position H_n in the q=0, s=1 regime, the
closed-form mean for general (p, q, s), two independent exact-distribution
engines (a dynamic program over the Markov state and a probability
generating function recursion), the percolation cluster-moment formulas,
and the cluster-based variance with its asymptotics.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from .params import WalkParams

DP_CAP_DEFAULT = 20000
PGF_CAP_DEFAULT = 5000
K_MAX_DEFAULT = 8

# The alpha = 1/2 branch of the summed second cluster moment is a removable
# singularity of the generic formula; route a narrow band to the harmonic form.
HALF_GUARD = 1e-12


# ---------------------------------------------------------------------------
# Gamma-ratio sequences  a_n^(k) = Gamma(n + k p) / (Gamma(n) Gamma(1 + k p))
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GammaRatioSeq:
    """Values a_n^(k) for n = 0..n_max, built by the product recurrence
    a_{n+1} = a_n (1 + k p / n), with a_0 := 1."""

    k: int
    p: float
    values: np.ndarray

    def __getitem__(self, n: int) -> float:
        return float(self.values[n])


def gamma_ratio(n: int, c: float) -> float:
    """Gamma(n + c) / (Gamma(n) Gamma(1 + c)) as a product, overflow-free
    for the sizes used here."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return float(np.prod(1.0 + c / np.arange(1, n)))


def gamma_ratio_loggamma(n: int, c: float) -> float:
    """Same ratio via log-gamma; cross-check only."""
    return float(np.exp(gammaln(n + c) - gammaln(n) - gammaln(1 + c)))


def gamma_ratio_seq(k: int, p: float, n_max: int) -> GammaRatioSeq:
    if k < 1:
        raise ValueError(f"order k must be >= 1, got {k}")
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must be in (0,1), got {p}")
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    values = np.empty(n_max + 1)
    values[0] = 1.0
    values[1] = 1.0
    if n_max > 1:
        steps = 1.0 + k * p / np.arange(1, n_max)
        values[2:] = np.cumprod(steps)
    return GammaRatioSeq(k=k, p=p, values=values)


# ---------------------------------------------------------------------------
# Moments in the q = 0, s = 1 regime
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def stirling2(k: int, i: int) -> int:
    """Stirling number of the second kind, S(k, i)."""
    if k == i:
        return 1
    if i == 0 or i > k:
        return 0
    return i * stirling2(k - 1, i) + stirling2(k - 1, i - 1)


def factorial_moment(n: int, k: int, p: float) -> float:
    """E[(H_n)_k] = k! sum_{i=1}^k (-1)^{k-i} C(k-1, i-1) a_n^(i).

    Valid for q = 0, s = 1.  The alternating sum is evaluated with exact
    compensated summation; cancellation limits usable orders to k <= ~10
    in double precision.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if k < 1:
        raise ValueError(f"order k must be >= 1, got {k}")
    terms = [
        (-1.0) ** (k - i) * math.comb(k - 1, i - 1) * gamma_ratio(n, i * p)
        for i in range(1, k + 1)
    ]
    return math.factorial(k) * math.fsum(terms)


def raw_moment(n: int, k: int, p: float, k_max: int = K_MAX_DEFAULT) -> float:
    """E[(H_n)^k] via Stirling-number conversion of the factorial moments
    (q = 0, s = 1 regime)."""
    if k < 1:
        raise ValueError(f"order k must be >= 1, got {k}")
    if k > k_max:
        raise ValueError(f"order k={k} exceeds k_max={k_max}")
    return math.fsum(
        stirling2(k, i) * factorial_moment(n, i, p) for i in range(1, k + 1)
    )


def mean_closed_form(n: int, params: WalkParams) -> float:
    """E[H_n] = rho n + (s - rho) Gamma(n+alpha) / (Gamma(1+alpha) Gamma(n))."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if params.q > 0.0 and params.alpha <= 0.0:
        raise ValueError(
            f"closed-form mean needs alpha > 0 when q > 0; got alpha={params.alpha}"
        )
    rho = params.rho
    return rho * n + (params.s - rho) * gamma_ratio(n, params.alpha)


# ---------------------------------------------------------------------------
# Exact distribution of H_n
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExactPmf:
    """Exact law of H_n on {0, ..., n}."""

    n: int
    mass: np.ndarray

    def __post_init__(self):
        if len(self.mass) != self.n + 1:
            raise ValueError("mass must have length n + 1")

    def check(self, tol: float = 1e-12) -> "ExactPmf":
        if np.any(self.mass < -tol):
            raise ValueError("negative probability mass")
        total = math.fsum(self.mass.tolist())
        if abs(total - 1.0) > tol:
            raise ValueError(f"mass sums to {total}, not 1")
        return self

    def mean(self) -> float:
        return math.fsum((np.arange(self.n + 1) * self.mass).tolist())

    def variance(self) -> float:
        mu = self.mean()
        dev = np.arange(self.n + 1) - mu
        return math.fsum((dev * dev * self.mass).tolist())


def _step_up_probs(m: int, h: np.ndarray, p: float, q: float) -> np.ndarray:
    # P(X_{m+1}=1 | H_m=h) as a convex combination of p and q; always in [0,1].
    return (p * h + q * (m - h)) / m


def exact_pmf(n: int, params: WalkParams, cap: int = DP_CAP_DEFAULT) -> ExactPmf:
    """Exact law of H_n by dynamic programming over the count state.

    O(n^2) work; n is capped for desk-scale runtimes.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n > cap:
        raise ValueError(f"n={n} exceeds DP cap {cap}")
    mass = np.zeros(n + 1)
    mass[0] = 1.0 - params.s
    mass[1] = params.s
    p, q = params.p, params.q
    for m in range(1, n):
        h = np.arange(m + 1)
        up = _step_up_probs(m, h, p, q)
        cur = mass[: m + 1]
        new = np.zeros(m + 2)
        new[: m + 1] = cur * (1.0 - up)
        new[1:] += cur * up
        mass[: m + 2] = new
    return ExactPmf(n=n, mass=mass)


def exact_pmf_rational(n: int, params: WalkParams):
    """Exact-rational DP for small n; returns a list of Fractions.

    Used as a roundoff-free oracle in tests.
    """
    if not 1 <= n <= 30:
        raise ValueError(f"rational mode supports 1 <= n <= 30, got {n}")
    p, q, s = (Fraction(x) for x in (params.p, params.q, params.s))
    mass = [1 - s, s] + [Fraction(0)] * (n - 1)
    for m in range(1, n):
        new = [Fraction(0)] * (n + 1)
        for h in range(m + 1):
            up = (p * h + q * (m - h)) / m
            new[h] += mass[h] * (1 - up)
            new[h + 1] += mass[h] * up
        mass = new
    return mass


def pgf_pmf(n: int, p: float, cap: int = PGF_CAP_DEFAULT) -> ExactPmf:
    """Exact law of H_n (q = 0, s = 1) from the probability generating
    function recursion  f_{m+1}(x) = (p x (x-1) / m) f'_m(x) + f_m(x),
    starting from f_1(x) = x.

    Independent oracle for the dynamic program.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n > cap:
        raise ValueError(f"n={n} exceeds PGF cap {cap}")
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must be in (0,1), got {p}")
    coef = np.zeros(n + 1)
    coef[1] = 1.0
    for m in range(1, n):
        deriv = coef[1: m + 1] * np.arange(1, m + 1)  # f'_m coefficients
        new = coef.copy()
        new[2: m + 2] += (p / m) * deriv              # x^2 f'_m
        new[1: m + 1] -= (p / m) * deriv              # -x f'_m
        coef = new
    return ExactPmf(n=n, mass=coef)


@dataclass(frozen=True)
class MomentTable:
    """Factorial and raw moments of H_n; entry [k-1] is order k."""

    n: int
    factorial: np.ndarray
    raw: np.ndarray


def moments_from_pmf(pmf: ExactPmf, k_max: int) -> MomentTable:
    """Moments by direct summation over the support."""
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    h = np.arange(pmf.n + 1, dtype=float)
    factorial = np.empty(k_max)
    raw = np.empty(k_max)
    falling = np.ones_like(h)
    power = np.ones_like(h)
    for k in range(1, k_max + 1):
        falling = falling * (h - (k - 1))
        power = power * h
        factorial[k - 1] = math.fsum((falling * pmf.mass).tolist())
        raw[k - 1] = math.fsum((power * pmf.mass).tolist())
    return MomentTable(n=pmf.n, factorial=factorial, raw=raw)


# ---------------------------------------------------------------------------
# Percolation cluster moments and the variance of H_n built from them
# ---------------------------------------------------------------------------

def cluster_moments_closed_form(n: int, alpha: float):
    """(E[#C_1], E[(#C_1)^2], sum_j E[(#C_j)^2]) for bond percolation with
    parameter alpha on a random recursive tree with n vertices.

    The third formula has a removable singularity at alpha = 1/2, where the
    harmonic-sum branch applies; a 1e-12 guard band routes to it.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0,1), got {alpha}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    mean_root = gamma_ratio(n, alpha)
    g2 = gamma_ratio(n, 2.0 * alpha)
    second_root = 2.0 * g2 - mean_root
    if abs(alpha - 0.5) < HALF_GUARD:
        sum_second = n * math.fsum(1.0 / ell for ell in range(1, n + 1))
    else:
        # Gamma(n+2a)/(Gamma(2a)Gamma(n)) = 2a * g2
        sum_second = n / (1.0 - 2.0 * alpha) + 2.0 * alpha * g2 / (2.0 * alpha - 1.0)
    return mean_root, second_root, sum_second


def variance_from_clusters(n: int, params: WalkParams) -> float:
    """Var[H_n] from the cluster-moment representation:

    rho(1-rho) sum_j E[(#C_j)^2] + (1-2rho)(s-rho) E[(#C_1)^2]
        - (s-rho)^2 (E[#C_1])^2
    """
    params.require_supercritical()
    rho, s = params.rho, params.s
    mean_root, second_root, sum_second = cluster_moments_closed_form(n, params.alpha)
    return (
        rho * (1.0 - rho) * sum_second
        + (1.0 - 2.0 * rho) * (s - rho) * second_root
        - (s - rho) ** 2 * mean_root**2
    )


def variance_asymptotic(params: WalkParams):
    """Leading-order growth of Var[H_n] for q > 0.

    Returns (branch, coefficient) where branch is 'linear' (coef * n),
    'n_log_n' (coef * n log n) or 'power_2alpha' (coef * n^(2 alpha)).
    """
    if params.q == 0.0:
        raise ValueError("variance asymptotics require q > 0")
    params.require_supercritical()
    alpha, rho, s = params.alpha, params.rho, params.s
    if abs(alpha - 0.5) < HALF_GUARD:
        return "n_log_n", rho * (1.0 - rho)
    if alpha < 0.5:
        return "linear", rho * (1.0 - rho) / (1.0 - 2.0 * alpha)
    coef = (
        rho * (1.0 - rho) / ((2.0 * alpha - 1.0) * math.gamma(2.0 * alpha))
        + (1.0 - 2.0 * rho) * (s - rho) / math.gamma(1.0 + 2.0 * alpha)
        - (s - rho) ** 2 / math.gamma(1.0 + alpha) ** 2
    )
    return "power_2alpha", coef
