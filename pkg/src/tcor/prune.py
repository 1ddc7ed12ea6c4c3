"""Candidate-pair generation from a truncated SVD.

Columns are ordered by the leading right singular vector. A pair of
columns ``gap`` positions apart in that order is kept only if the
partial-sum lower bound on its squared distance,
``sum_c s_c^2 (V[i, c] - V[j, c])^2``, stays within the threshold.
The bound never exceeds the true squared distance, so the candidate
set always contains every qualifying pair.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

SLACK = 1e-8


@dataclass(frozen=True)
class PruningState:
    """Permutation, scaled projection and run length for one threshold.

    ``threshold`` is the squared-distance bound (``2 (1 - t)`` for
    correlation) before slack is added.
    """

    perm: np.ndarray
    G: np.ndarray
    radius: float
    ell: int
    threshold: float
    slack: float = SLACK

    @property
    def n(self) -> int:
        return self.perm.shape[0]

    @property
    def p(self) -> int:
        return self.G.shape[1]

    def with_projection(self, G) -> "PruningState":
        return PruningState(self.perm, G, self.radius, self.ell, self.threshold, self.slack)


@dataclass(frozen=True)
class CandidatePairs:
    """Candidate (i, j) pairs in original column indices, i < j, sorted."""

    i: np.ndarray
    j: np.ndarray
    gap_counts: np.ndarray
    tests: int = 0

    def __len__(self):
        return self.i.shape[0]

    def as_set(self):
        return set(zip(self.i.tolist(), self.j.tolist()))


def correlation_threshold(t: float) -> float:
    return 2.0 * (1.0 - t)


def order_permutation(v1) -> np.ndarray:
    """Stable ascending order of ``v1``; ties keep original index order."""
    return np.argsort(np.asarray(v1), kind="stable")


def longest_run(sorted_v1, radius: float) -> int:
    """Largest g such that some window ``sorted_v1[j : j+g+1]`` spans at most ``radius``."""
    x = np.asarray(sorted_v1, dtype=np.float64)
    if x.shape[0] < 2:
        return 0
    # closed window; the subtraction form is checked explicitly below
    last = np.searchsorted(x, x + radius, side="right") - 1
    last = np.minimum(last, x.shape[0] - 1)
    idx = np.arange(x.shape[0])
    # guard against rounding in x + radius vs x[k] - x[j]
    while True:
        over = (last > idx) & (x[last] - x[idx] > radius)
        if not over.any():
            break
        last[over] -= 1
    while True:
        nxt = np.minimum(last + 1, x.shape[0] - 1)
        under = (nxt > last) & (x[nxt] - x[idx] <= radius)
        if not under.any():
            break
        last[under] += 1
    return int((last - idx).max())


def scaled_projection(svd, perm) -> np.ndarray:
    """``G[r, c] = V[perm[r], c] * s[c]``, column-contiguous."""
    return np.asfortranarray(svd.V[perm] * svd.singular_values)


def candidates_at_gap(G, gap: int, threshold: float, slack: float = SLACK) -> np.ndarray:
    """Permuted start indices ``j`` with ``||G[j+gap] - G[j]||^2 <= threshold + slack``.

    Columns are accumulated one at a time and rows drop out as soon as
    the running sum exceeds the bound. The running sum is a prefix of
    the full sum, so adding columns can only remove rows.
    """
    n, p = G.shape
    if not 1 <= gap <= n - 1:
        raise ValueError(f"gap {gap} outside [1, {n - 1}]")
    bound = threshold + slack
    d = G[gap:, 0] - G[:-gap, 0]
    acc = d * d
    idx = np.flatnonzero(acc <= bound)
    acc = acc[idx]
    for c in range(1, p):
        if idx.size == 0:
            break
        col = G[:, c]
        d = col[idx + gap] - col[idx]
        acc += d * d
        keep = acc <= bound
        idx = idx[keep]
        acc = acc[keep]
    return idx


def estimate_adjacent_count(G, threshold: float, slack: float = SLACK) -> int:
    return int(candidates_at_gap(G, 1, threshold, slack).size)


def prepare(svd, threshold: float, slack: float = SLACK) -> PruningState:
    """Order columns by the leading singular vector and compute the run length.

    The run-length radius includes the slack so the window is consistent
    with the candidate test.
    """
    s0 = float(svd.singular_values[0])
    v1 = svd.V[:, 0]
    perm = order_permutation(v1)
    radius = math.sqrt(threshold + slack) / s0
    ell = longest_run(v1[perm], radius)
    return PruningState(perm, scaled_projection(svd, perm), radius, ell, threshold, slack)


def _gap_block(G, gaps, threshold, slack):
    return [candidates_at_gap(G, g, threshold, slack) for g in gaps]


def _gap_blocks(ell: int, n: int, tasks: int):
    # balance blocks by the number of tests (n - gap) rather than by gap count
    gaps = np.arange(1, ell + 1)
    if tasks <= 1 or ell <= 1:
        return [gaps]
    work = np.cumsum(n - gaps)
    edges = np.searchsorted(work, np.linspace(0, work[-1], tasks + 1)[1:-1])
    return [b for b in np.split(gaps, edges) if b.size]


def generate_candidates(state: PruningState, threads: int = 1) -> CandidatePairs:
    """Union of candidates over gaps ``1..ell``, mapped to original indices."""
    n, ell = state.n, state.ell
    if ell == 0:
        return CandidatePairs(np.empty(0, np.int64), np.empty(0, np.int64), np.zeros(0, np.int64), 0)
    G = state.G
    blocks = _gap_blocks(ell, n, 4 * threads if threads > 1 else 1)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda b: _gap_block(G, b, state.threshold, state.slack), blocks))
    else:
        parts = [_gap_block(G, b, state.threshold, state.slack) for b in blocks]
    starts = [x for part in parts for x in part]
    counts = np.array([x.size for x in starts], dtype=np.int64)
    gaps = np.repeat(np.arange(1, ell + 1), counts)
    lo = np.concatenate(starts) if starts else np.empty(0, np.int64)
    a = state.perm[lo]
    b = state.perm[lo + gaps]
    i = np.minimum(a, b).astype(np.int64)
    j = np.maximum(a, b).astype(np.int64)
    order = np.lexsort((j, i))
    tests = int(ell * n - ell * (ell + 1) // 2)
    return CandidatePairs(i[order], j[order], counts, tests)
