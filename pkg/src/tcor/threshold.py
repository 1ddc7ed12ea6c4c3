"""Exact evaluation of candidate pairs and the final threshold test."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .io import ColumnStats, as_matrix

CHUNK = 4096


@dataclass
class Diagnostics:
    m: int = 0
    n: int = 0
    p_initial: int = 0
    p_final: int = 0
    ell: int = 0
    candidate_count: int = 0
    evaluated_count: int = 0
    tests_per_round: list = field(default_factory=list)
    adjacent_counts: list = field(default_factory=list)
    ranks: list = field(default_factory=list)
    savings_estimate: float = float("nan")
    evaluated_fraction: float = float("nan")
    rank_deficient: bool = False
    svd_method: str = ""
    wall_seconds: float = 0.0

    def as_dict(self):
        return dict(self.__dict__)


@dataclass
class ThresholdedResult:
    """Pairs (i, j) with i < j and their values, sorted by (i, j)."""

    i: np.ndarray
    j: np.ndarray
    values: np.ndarray
    diagnostics: Diagnostics = field(default_factory=Diagnostics)

    def __len__(self):
        return self.i.shape[0]

    def __iter__(self):
        return zip(self.i.tolist(), self.j.tolist(), self.values.tolist())

    def pairs(self):
        return set(zip(self.i.tolist(), self.j.tolist()))

    def as_dict(self):
        return {(a, b): v for a, b, v in self}


def _check_index(k, n):
    if not 0 <= k < n:
        raise IndexError(f"column index {k} out of range for {n} columns")


def exact_correlation(A, stats: ColumnStats, i: int, j: int) -> float:
    A = as_matrix(A)
    _check_index(i, A.n)
    _check_index(j, A.n)
    if i > j:
        i, j = j, i
    a = A.values[:, i] - stats.means[i]
    b = A.values[:, j] - stats.means[j]
    # norms from the same dot products, so identical columns give exactly 1
    v = float(a @ b) / np.sqrt(float(a @ a) * float(b @ b))
    return min(1.0, max(-1.0, v))


def exact_distance(A, i: int, j: int) -> float:
    A = as_matrix(A)
    _check_index(i, A.n)
    _check_index(j, A.n)
    return float(np.linalg.norm(A.values[:, i] - A.values[:, j]))


def _cor_chunk(a, stats, i, j):
    # same arithmetic as exact_correlation, batched
    x = a[:, i] - stats.means[i]
    y = a[:, j] - stats.means[j]
    xy = np.einsum("ij,ij->j", x, y)
    v = xy / np.sqrt(np.einsum("ij,ij->j", x, x) * np.einsum("ij,ij->j", y, y))
    return np.clip(v, -1.0, 1.0)


def _dist_chunk(a, i, j):
    d = a[:, i] - a[:, j]
    return np.sqrt(np.einsum("ij,ij->j", d, d))


def _map_chunks(fn, i, j, threads, chunk):
    bounds = [(k, min(k + chunk, i.shape[0])) for k in range(0, i.shape[0], chunk)]
    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda b: fn(i[b[0]:b[1]], j[b[0]:b[1]]), bounds))
    else:
        parts = [fn(i[lo:hi], j[lo:hi]) for lo, hi in bounds]
    return np.concatenate(parts) if parts else np.empty(0)


def _sorted_result(i, j, v, keep):
    i, j, v = i[keep], j[keep], v[keep]
    order = np.lexsort((j, i))
    return ThresholdedResult(i[order], j[order], v[order])


def filter_candidates(A, stats: ColumnStats, cand, t: float, threads: int = 1,
                      chunk: int = CHUNK) -> ThresholdedResult:
    """Keep the candidates whose exact correlation is at least ``t``."""
    a = as_matrix(A).values
    i = np.asarray(cand.i, dtype=np.int64)
    j = np.asarray(cand.j, dtype=np.int64)
    v = _map_chunks(lambda x, y: _cor_chunk(a, stats, x, y), i, j, threads, chunk)
    return _sorted_result(i, j, v, v >= t)


def filter_distance(A, cand, d: float, threads: int = 1, chunk: int = CHUNK) -> ThresholdedResult:
    """Keep the candidates whose exact Euclidean distance is at most ``d``."""
    a = as_matrix(A).values
    i = np.asarray(cand.i, dtype=np.int64)
    j = np.asarray(cand.j, dtype=np.int64)
    v = _map_chunks(lambda x, y: _dist_chunk(a, x, y), i, j, threads, chunk)
    return _sorted_result(i, j, v, v <= d)
