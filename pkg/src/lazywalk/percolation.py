"""Uniform random recursive trees, Bernoulli bond percolation, and the
divide-and-color representation of the walk.

A recursive tree on vertices 1..n attaches each new vertex i to a
uniformly chosen earlier vertex.  Bond percolation keeps each edge
independently with probability alpha; the size of the cluster containing
vertex 1 is then distributed like the position H_n of the walk with
parameters (p=alpha, q=0, s=1).  Coloring every cluster with an
independent spin (Bernoulli(s) for the root cluster, Bernoulli(rho)
otherwise) and summing spin-weighted sizes reproduces H_n for general
(p, q, s) with 0 <= q < p < 1.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np
from numba import njit

from .params import WalkParams
from .rng import philox_stream

ENUM_CAP = 8
_CHUNK = 8192  # fixed batch chunk; part of the deterministic stream layout

_SUB_TREE, _SUB_EDGE, _SUB_SPIN = 0, 1, 2


@dataclass(frozen=True)
class RecursiveTree:
    """parent[i] is the attachment vertex of i, for i = 2..n (1-based
    arrays; entries 0 and 1 are unused)."""

    n: int
    parent: np.ndarray

    def __post_init__(self):
        for i in range(2, self.n + 1):
            if not 1 <= self.parent[i] < i:
                raise ValueError(f"parent[{i}]={self.parent[i]} violates recursiveness")


@dataclass(frozen=True)
class PercolationOutcome:
    """Open-edge set and cluster decomposition of a percolated tree.

    Cluster ids are assigned by minimal vertex label, so cluster 1 always
    contains vertex 1.  ``sizes[j]`` is the size of cluster j (1-based;
    sizes[0] unused).
    """

    tree: RecursiveTree
    open_edge: np.ndarray
    cluster_of: np.ndarray
    sizes: np.ndarray

    @property
    def n_clusters(self) -> int:
        return len(self.sizes) - 1

    @property
    def root_cluster_size(self) -> int:
        return int(self.sizes[1])


def grow_tree(n: int, seed: int, stream: int = 0) -> RecursiveTree:
    """Uniform random recursive tree on n vertices."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    parent = np.zeros(n + 1, dtype=np.int64)
    if n > 1:
        gen = philox_stream(seed, stream, _SUB_TREE)
        u = gen.random(n - 1)
        parent[2:] = 1 + (u * np.arange(1, n)).astype(np.int64)
    return RecursiveTree(n=n, parent=parent)


def percolate(tree: RecursiveTree, alpha: float, seed: int, stream: int = 0) -> PercolationOutcome:
    """Keep each edge independently with probability alpha and decompose
    into clusters."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0,1], got {alpha}")
    n = tree.n
    open_edge = np.zeros(n + 1, dtype=bool)
    if n > 1:
        gen = philox_stream(seed, stream, _SUB_EDGE)
        open_edge[2:] = gen.random(n - 1) < alpha
    # Minimal label of each vertex's cluster; parents precede children,
    # so one upward pass suffices.
    rep = np.arange(n + 1)
    for i in range(2, n + 1):
        if open_edge[i]:
            rep[i] = rep[tree.parent[i]]
    reps = np.unique(rep[1:])
    cluster_id = {r: j + 1 for j, r in enumerate(reps)}
    cluster_of = np.zeros(n + 1, dtype=np.int64)
    sizes = np.zeros(len(reps) + 1, dtype=np.int64)
    for v in range(1, n + 1):
        cid = cluster_id[rep[v]]
        cluster_of[v] = cid
        sizes[cid] += 1
    return PercolationOutcome(tree=tree, open_edge=open_edge,
                              cluster_of=cluster_of, sizes=sizes)


def divide_and_color_sum(
    outcome: PercolationOutcome, rho: float, s: float, seed: int, stream: int = 0
) -> int:
    """Spin-weighted cluster-size sum: the root cluster gets a
    Bernoulli(s) spin, every other cluster Bernoulli(rho)."""
    gen = philox_stream(seed, stream, _SUB_SPIN)
    u = gen.random(outcome.n_clusters)
    total = 0
    for j in range(1, outcome.n_clusters + 1):
        thresh = s if j == 1 else rho
        if u[j - 1] < thresh:
            total += int(outcome.sizes[j])
    return total


# ---------------------------------------------------------------------------
# Batch samplers (chunked streams, fixed chunk size => schedule-independent)
# ---------------------------------------------------------------------------

@njit(cache=True)
def _root_sizes_kernel(u_parent, u_edge, alpha, out):
    rows, ne = u_parent.shape
    for r in range(rows):
        in_root = np.zeros(ne + 2, dtype=np.uint8)
        in_root[1] = 1
        size = 1
        for i in range(2, ne + 2):
            par = 1 + int(u_parent[r, i - 2] * (i - 1))
            if u_edge[r, i - 2] < alpha and in_root[par] == 1:
                in_root[i] = 1
                size += 1
        out[r] = size


@njit(cache=True)
def _spin_sum_kernel(u_parent, u_edge, u_spin, alpha, rho, s, out):
    rows, ne = u_parent.shape
    n = ne + 1
    for r in range(rows):
        rep = np.zeros(n + 1, dtype=np.int64)
        rep[1] = 1
        for i in range(2, n + 1):
            par = 1 + int(u_parent[r, i - 2] * (i - 1))
            if u_edge[r, i - 2] < alpha:
                rep[i] = rep[par]
            else:
                rep[i] = i
        total = 0
        for v in range(1, n + 1):
            rv = rep[v]
            thresh = s if rv == 1 else rho
            if u_spin[r, rv - 1] < thresh:
                total += 1
        out[r] = total


def _chunks(total: int):
    start = 0
    c = 0
    while start < total:
        yield c, min(_CHUNK, total - start)
        start += _CHUNK
        c += 1


def sample_root_cluster_sizes(n: int, alpha: float, seed: int, samples: int) -> np.ndarray:
    """Sizes of the cluster of vertex 1 over independent (tree, percolation)
    draws."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0,1], got {alpha}")
    out = np.zeros(samples, dtype=np.int64)
    pos = 0
    for c, rows in _chunks(samples):
        u_parent = philox_stream(seed, c, _SUB_TREE).random((rows, n - 1)) if n > 1 \
            else np.zeros((rows, 0))
        u_edge = philox_stream(seed, c, _SUB_EDGE).random((rows, n - 1)) if n > 1 \
            else np.zeros((rows, 0))
        if n == 1:
            out[pos: pos + rows] = 1
        else:
            _root_sizes_kernel(u_parent, u_edge, alpha, out[pos: pos + rows])
        pos += rows
    return out


def sample_spin_sums(params: WalkParams, n: int, seed: int, samples: int) -> np.ndarray:
    """Divide-and-color samples distributed like H_n for parameters
    (p, q, s) with 0 <= q < p < 1."""
    params.require_supercritical()
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    alpha, rho, s = params.alpha, params.rho, params.s
    out = np.zeros(samples, dtype=np.int64)
    pos = 0
    for c, rows in _chunks(samples):
        if n == 1:
            u_spin = philox_stream(seed, c, _SUB_SPIN).random((rows, 1))
            out[pos: pos + rows] = (u_spin[:, 0] < s).astype(np.int64)
        else:
            u_parent = philox_stream(seed, c, _SUB_TREE).random((rows, n - 1))
            u_edge = philox_stream(seed, c, _SUB_EDGE).random((rows, n - 1))
            u_spin = philox_stream(seed, c, _SUB_SPIN).random((rows, n))
            _spin_sum_kernel(u_parent, u_edge, u_spin, alpha, rho, s,
                             out[pos: pos + rows])
        pos += rows
    return out


# ---------------------------------------------------------------------------
# Exact small-n enumeration (oracle for the closed-form cluster moments)
# ---------------------------------------------------------------------------

def enumerate_exact(n: int, alpha: float):
    """(E[#C_1], E[(#C_1)^2], sum_j E[(#C_j)^2]) by exhaustive enumeration
    of all attachment sequences and edge states, with exact rational
    weights.  Cost (n-1)! * 2^(n-1); capped at n = 8.
    """
    if not 1 <= n <= ENUM_CAP:
        raise ValueError(f"enumeration supports 1 <= n <= {ENUM_CAP}, got {n}")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0,1), got {alpha}")
    if n == 1:
        return 1.0, 1.0, 1.0
    ne = n - 1
    # Integer totals per open-edge count; rational weights applied once at
    # the end, keeping the hot loop in machine ints.
    tot_root = [0] * (ne + 1)
    tot_root2 = [0] * (ne + 1)
    tot_sum2 = [0] * (ne + 1)
    rep = [0] * (n + 1)
    rep[1] = 1
    for parents in product(*[range(1, i) for i in range(2, n + 1)]):
        for mask in range(1 << ne):
            for i in range(2, n + 1):
                if mask & (1 << (i - 2)):
                    rep[i] = rep[parents[i - 2]]
                else:
                    rep[i] = i
            counts = {}
            for v in range(1, n + 1):
                counts[rep[v]] = counts.get(rep[v], 0) + 1
            o = bin(mask).count("1")
            c1 = counts[1]
            tot_root[o] += c1
            tot_root2[o] += c1 * c1
            tot_sum2[o] += sum(c * c for c in counts.values())
    a = Fraction(alpha)
    seq_weight = Fraction(1, math.factorial(ne))
    mean_root = Fraction(0)
    second_root = Fraction(0)
    sum_second = Fraction(0)
    for o in range(ne + 1):
        w = seq_weight * a**o * (1 - a) ** (ne - o)
        mean_root += w * tot_root[o]
        second_root += w * tot_root2[o]
        sum_second += w * tot_sum2[o]
    return float(mean_root), float(second_root), float(sum_second)
