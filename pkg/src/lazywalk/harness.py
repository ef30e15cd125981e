"""Streaming estimators, goodness-of-fit tests, and experiment drivers.

The drivers turn the model's limit behavior (law of large numbers,
central limit behavior with random centering, iterated-logarithm bounds,
Mittag-Leffler scaling) into reproducible finite-n Monte Carlo checks.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import kolmogorov, ndtr
from scipy.stats import chi2

from .exact import ExactPmf, gamma_ratio, mean_closed_form
from .params import WalkParams
from .walk import TrajectoryStat, simulate_batch


# ---------------------------------------------------------------------------
# Streaming moments with associative merge
# ---------------------------------------------------------------------------

@dataclass
class StreamMoments:
    """One-pass mean and central moment accumulators up to order four.

    ``merge`` is associative and commutative, so chunked or parallel
    accumulation gives the same statistics as a single pass.
    """

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0
    m3: float = 0.0
    m4: float = 0.0

    def push(self, x: float) -> None:
        n1 = self.count
        self.count += 1
        n = self.count
        delta = x - self.mean
        delta_n = delta / n
        delta_n2 = delta_n * delta_n
        term1 = delta * delta_n * n1
        self.mean += delta_n
        self.m4 += (term1 * delta_n2 * (n * n - 3 * n + 3)
                    + 6 * delta_n2 * self.m2 - 4 * delta_n * self.m3)
        self.m3 += term1 * delta_n * (n - 2) - 3 * delta_n * self.m2
        self.m2 += term1

    def extend(self, xs) -> None:
        for x in np.asarray(xs, dtype=float).ravel():
            self.push(float(x))

    @classmethod
    def from_samples(cls, xs) -> "StreamMoments":
        acc = cls()
        acc.extend(xs)
        return acc

    def variance(self) -> float:
        return self.m2 / self.count if self.count > 0 else 0.0

    def std(self) -> float:
        return math.sqrt(self.variance())

    def central_moment(self, k: int) -> float:
        if self.count == 0:
            return 0.0
        return {2: self.m2, 3: self.m3, 4: self.m4}[k] / self.count


def merge_moments(a: StreamMoments, b: StreamMoments) -> StreamMoments:
    """Combine two accumulators as if their samples were one stream."""
    if a.count == 0:
        return StreamMoments(b.count, b.mean, b.m2, b.m3, b.m4)
    if b.count == 0:
        return StreamMoments(a.count, a.mean, a.m2, a.m3, a.m4)
    na, nb = a.count, b.count
    n = na + nb
    delta = b.mean - a.mean
    mean = a.mean + delta * nb / n
    m2 = a.m2 + b.m2 + delta**2 * na * nb / n
    m3 = (a.m3 + b.m3
          + delta**3 * na * nb * (na - nb) / n**2
          + 3.0 * delta * (na * b.m2 - nb * a.m2) / n)
    m4 = (a.m4 + b.m4
          + delta**4 * na * nb * (na * na - na * nb + nb * nb) / n**3
          + 6.0 * delta**2 * (na * na * b.m2 + nb * nb * a.m2) / n**2
          + 4.0 * delta * (na * b.m3 - nb * a.m3) / n)
    return StreamMoments(n, mean, m2, m3, m4)


# ---------------------------------------------------------------------------
# Goodness-of-fit tests
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KsResult:
    statistic: float
    p_value: float


def ks_normal(samples) -> KsResult:
    """One-sample Kolmogorov-Smirnov test against N(0,1); p-value from the
    asymptotic Kolmogorov series."""
    x = np.sort(np.asarray(samples, dtype=float).ravel())
    n = x.size
    if n < 8:
        raise ValueError(f"need at least 8 samples, got {n}")
    cdf = ndtr(x)
    i = np.arange(1, n + 1)
    d_plus = np.max(i / n - cdf)
    d_minus = np.max(cdf - (i - 1) / n)
    d = float(max(d_plus, d_minus))
    return KsResult(statistic=d, p_value=float(kolmogorov(math.sqrt(n) * d)))


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    dof: int
    p_value: float


def chi_square_gof(counts, exact: ExactPmf, min_bin: float = 5.0) -> ChiSquareResult:
    """Pearson chi-square of observed counts on {0..n} against an exact
    pmf, pooling adjacent bins whose expected count falls below min_bin."""
    observed = np.asarray(counts, dtype=float)
    if observed.shape != (exact.n + 1,):
        raise ValueError(
            f"counts must align with the pmf support 0..{exact.n}, "
            f"got shape {observed.shape}"
        )
    total = observed.sum()
    expected = exact.mass * total
    pooled_obs, pooled_exp = [], []
    acc_o = acc_e = 0.0
    for o, e in zip(observed, expected):
        acc_o += o
        acc_e += e
        if acc_e >= min_bin:
            pooled_obs.append(acc_o)
            pooled_exp.append(acc_e)
            acc_o = acc_e = 0.0
    if acc_e > 0.0:
        if pooled_exp:
            pooled_obs[-1] += acc_o
            pooled_exp[-1] += acc_e
        else:
            pooled_obs.append(acc_o)
            pooled_exp.append(acc_e)
    if len(pooled_exp) < 2:
        raise ValueError("pooling left fewer than 2 bins")
    obs = np.array(pooled_obs)
    exp = np.array(pooled_exp)
    stat = float(np.sum((obs - exp) ** 2 / exp))
    dof = len(exp) - 1
    return ChiSquareResult(statistic=stat, dof=dof,
                           p_value=float(chi2.sf(stat, dof)))


# ---------------------------------------------------------------------------
# Experiment drivers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CltResult:
    t_samples: np.ndarray
    ks: KsResult


def clt_experiment(
    params: WalkParams, n: int, horizon: int, trials: int, seed: int
) -> CltResult:
    """Self-normalized central-limit check in the q=0, s=1 regime.

    Each trial runs one trajectory to the horizon N, estimates the
    martingale limit as w = H_N / a_N, and emits
    T = (H_n - w a_n) / sqrt(w a_n).  The horizon must dominate n
    (N >= 100 n) for the limit estimate to have settled.
    """
    if not params.laziest:
        raise ValueError("clt_experiment requires q = 0 and s = 1")
    if horizon < 100 * n:
        raise ValueError(f"horizon {horizon} must be >= 100 * n = {100 * n}")
    pos = simulate_batch(params, horizon, seed, trials, checkpoints=[n, horizon])
    a_n = gamma_ratio(n, params.p)
    a_big = gamma_ratio(horizon, params.p)
    w = pos[:, 1] / a_big
    t = (pos[:, 0] - w * a_n) / np.sqrt(w * a_n)
    return CltResult(t_samples=t, ks=ks_normal(t))


def q_positive_clt_experiment(
    params: WalkParams, n: int, trials: int, seed: int
) -> CltResult:
    """Central-limit check for q > 0, alpha < 1/2: deterministic centering
    at the closed-form mean, norming by sqrt(rho(1-rho)/(1-2 alpha) n)."""
    if params.q <= 0.0:
        raise ValueError("q_positive_clt_experiment requires q > 0")
    if params.alpha >= 0.5:
        raise ValueError(f"requires alpha < 1/2, got alpha={params.alpha}")
    pos = simulate_batch(params, n, seed, trials, checkpoints=[n])
    rho = params.rho
    scale = math.sqrt(rho * (1.0 - rho) / (1.0 - 2.0 * params.alpha) * n)
    t = (pos[:, 0] - mean_closed_form(n, params)) / scale
    return CltResult(t_samples=t, ks=ks_normal(t))


# ---------------------------------------------------------------------------
# Iterated-logarithm tracker (diagnostic only: log log convergence cannot
# be certified at desk scale)
# ---------------------------------------------------------------------------

def phi(t: float) -> float:
    """sqrt(2 t log log t), defined for t > e."""
    return math.sqrt(2.0 * t * math.log(math.log(t)))


def phi_hat(t: float) -> float:
    """sqrt(2 t log |log t|); agrees with phi for t > e."""
    return math.sqrt(2.0 * t * math.log(abs(math.log(t))))


_NORMALIZERS = {"phi": phi, "phi_hat": phi_hat}


@dataclass(frozen=True)
class LilTrackerState:
    """Running extrema of (H_t - w a_t) / phi(w a_t) across checkpoints
    with w a_t > e (w fixed from the final checkpoint)."""

    checkpoints: np.ndarray
    deviations: np.ndarray
    running_max: np.ndarray
    running_min: np.ndarray
    w_hat: float
    normalizer: str


def lil_tracker(stat: TrajectoryStat, normalizer: str = "phi") -> LilTrackerState:
    if normalizer not in _NORMALIZERS:
        raise ValueError(f"unknown normalizer {normalizer!r}")
    norm = _NORMALIZERS[normalizer]
    w = stat.w_hat
    p = stat.params.p
    times, devs = [], []
    for t, h in zip(stat.checkpoints, stat.positions):
        wa = w * gamma_ratio(int(t), p)
        if wa <= math.e:
            continue
        times.append(int(t))
        devs.append((h - wa) / norm(wa))
    if len(times) < 4:
        raise ValueError(
            f"need >= 4 checkpoints with w * a_t > e, got {len(times)}"
        )
    devs = np.array(devs)
    return LilTrackerState(
        checkpoints=np.array(times, dtype=np.int64),
        deviations=devs,
        running_max=np.maximum.accumulate(devs),
        running_min=np.minimum.accumulate(devs),
        w_hat=w,
        normalizer=normalizer,
    )
