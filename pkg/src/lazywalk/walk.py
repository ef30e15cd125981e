"""Monte Carlo simulation of the step-reinforced walk.

Two simulators are provided: a counting-mode walker that keeps only the
forward-step count (O(1) state), and a full-history walker that stores
every step and implements the uniform-past-step rule literally.  They are
distributionally equivalent; the full-history mode exists to guard the
counting reformulation.

Each trajectory owns Philox stream (seed, trajectory_index), so results
are bit-identical regardless of execution order or worker count.
"""

from dataclasses import dataclass

import numpy as np
from numba import njit

from .exact import gamma_ratio
from .params import WalkParams
from .rng import philox_stream

FULL_HISTORY_CAP = 10**6


@dataclass(frozen=True)
class TrajectoryStat:
    """Checkpointed positions of one trajectory.

    ``w_hat`` is the martingale-limit estimate H_N / a_N at the final
    checkpoint N (a_N built with exponent params.p).
    """

    params: WalkParams
    seed: int
    checkpoints: np.ndarray
    positions: np.ndarray
    w_hat: float


@njit(cache=True)
def _count_kernel(u, p, q, h1, checkpoints, out):
    h = h1
    ci = 0
    while ci < checkpoints.shape[0] and checkpoints[ci] == 1:
        out[ci] = h
        ci += 1
    for m in range(1, u.shape[0] + 1):
        up = (p * h + q * (m - h)) / m
        if u[m - 1] < up:
            h += 1
        while ci < checkpoints.shape[0] and checkpoints[ci] == m + 1:
            out[ci] = h
            ci += 1
    return h


@njit(cache=True)
def _full_history_kernel(u_pick, u_move, p, q, x1, checkpoints, out):
    n = u_pick.shape[0] + 1
    x = np.zeros(n, dtype=np.uint8)
    x[0] = x1
    h = int(x1)
    ci = 0
    while ci < checkpoints.shape[0] and checkpoints[ci] == 1:
        out[ci] = h
        ci += 1
    for m in range(1, n):
        j = int(u_pick[m - 1] * m)  # uniform past time, 0-based
        thresh = p if x[j] == 1 else q
        if u_move[m - 1] < thresh:
            x[m] = 1
            h += 1
        while ci < checkpoints.shape[0] and checkpoints[ci] == m + 1:
            out[ci] = h
            ci += 1
    return h


def dyadic_checkpoints(n: int) -> np.ndarray:
    """{1, 2, 4, ..., 2^floor(log2 n)} plus n itself."""
    ticks = [1 << e for e in range(n.bit_length()) if (1 << e) <= n]
    if ticks[-1] != n:
        ticks.append(n)
    return np.asarray(ticks, dtype=np.int64)


def _validated_checkpoints(checkpoints, n: int) -> np.ndarray:
    if checkpoints is None:
        return dyadic_checkpoints(n)
    cps = np.asarray(checkpoints, dtype=np.int64)
    if cps.size == 0:
        raise ValueError("checkpoint list must not be empty")
    if np.any(np.diff(cps) <= 0):
        raise ValueError("checkpoints must be strictly increasing")
    if cps[0] < 1 or cps[-1] > n:
        raise ValueError(f"checkpoints must lie in [1, {n}]")
    return cps


def _finish(params, seed, cps, positions) -> TrajectoryStat:
    n_final = int(cps[-1])
    w_hat = positions[-1] / gamma_ratio(n_final, params.p) if n_final >= 1 else 0.0
    return TrajectoryStat(
        params=params, seed=seed, checkpoints=cps,
        positions=positions, w_hat=float(w_hat),
    )


def simulate_counting(
    params: WalkParams, n: int, seed: int, checkpoints=None, stream: int = 0
) -> TrajectoryStat:
    """One trajectory with O(1) state beyond the checkpoint record."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    cps = _validated_checkpoints(checkpoints, n)
    gen = philox_stream(seed, stream)
    h1 = 1 if gen.random() < params.s else 0
    u = gen.random(n - 1)
    out = np.zeros(cps.shape[0], dtype=np.int64)
    _count_kernel(u, params.p, params.q, h1, cps, out)
    return _finish(params, seed, cps, out)


def simulate_full_history(
    params: WalkParams, n: int, seed: int, checkpoints=None, stream: int = 0
) -> TrajectoryStat:
    """One trajectory by the literal rule: draw a uniform past time and
    repeat (or not) what happened there.  O(n) memory."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n > FULL_HISTORY_CAP:
        raise ValueError(f"n={n} exceeds full-history cap {FULL_HISTORY_CAP}")
    cps = _validated_checkpoints(checkpoints, n)
    gen = philox_stream(seed, stream)
    x1 = 1 if gen.random() < params.s else 0
    u_pick = gen.random(n - 1)
    u_move = gen.random(n - 1)
    out = np.zeros(cps.shape[0], dtype=np.int64)
    _full_history_kernel(u_pick, u_move, params.p, params.q, x1, cps, out)
    return _finish(params, seed, cps, out)


def estimate_w(stat: TrajectoryStat, at: int, p: float) -> float:
    """H_at / a_at for a recorded checkpoint, a_at with exponent p."""
    idx = np.searchsorted(stat.checkpoints, at)
    if idx >= stat.checkpoints.shape[0] or stat.checkpoints[idx] != at:
        raise ValueError(f"time {at} is not a recorded checkpoint")
    return float(stat.positions[idx]) / gamma_ratio(at, p)


def to_biased_position(h: int, n: int) -> int:
    """Map the forward-step count to the biased +/-1 walk: S_n = 2 H_n - n."""
    if not 0 <= h <= n:
        raise ValueError(f"need 0 <= h <= n, got h={h}, n={n}")
    return 2 * h - n


def simulate_batch(
    params: WalkParams,
    n: int,
    seed: int,
    trials: int,
    checkpoints=None,
    mode: str = "counting",
) -> np.ndarray:
    """Positions at the checkpoints for ``trials`` independent
    trajectories; row j uses stream (seed, j).  Shape (trials, n_checkpoints).
    """
    if mode not in ("counting", "full"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "full" and n > FULL_HISTORY_CAP:
        raise ValueError(f"n={n} exceeds full-history cap {FULL_HISTORY_CAP}")
    cps = _validated_checkpoints(checkpoints, n)
    out = np.zeros((trials, cps.shape[0]), dtype=np.int64)
    p, q, s = params.p, params.q, params.s
    for j in range(trials):
        gen = philox_stream(seed, j)
        first = 1 if gen.random() < s else 0
        if mode == "counting":
            u = gen.random(n - 1)
            _count_kernel(u, p, q, first, cps, out[j])
        else:
            u_pick = gen.random(n - 1)
            u_move = gen.random(n - 1)
            _full_history_kernel(u_pick, u_move, p, q, first, cps, out[j])
    return out
