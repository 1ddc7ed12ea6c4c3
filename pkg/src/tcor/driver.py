"""End-to-end thresholded correlation and distance computations."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace

import numpy as np

from . import prune
from .errors import ConfigError, SizeGuardError
from .io import as_matrix, column_stats, standardize
from .svd import CenteredScaledOperator, RawOperator, extend, truncated_svd
from .threshold import (
    Diagnostics,
    ThresholdedResult,
    filter_candidates,
    filter_distance,
)

BRUTE_FORCE_MAX_N = 20_000


@dataclass(frozen=True)
class TcorConfig:
    """Run parameters.

    ``p_max`` and ``candidate_budget`` default to ``min(100, max rank)``
    and ``10 * n`` once the data are known. An automatic ``p_max`` also
    caps ``p0``; an explicit one smaller than ``p0`` is an error.
    """

    t: float | None = None
    p0: int = 10
    p_max: int | None = None
    growth: float = 2.0
    candidate_budget: int | None = None
    improvement_floor: float = 0.10
    tol: float = 1e-8
    max_iter: int = 1000
    threads: int = 1
    svd_method: str = "auto"
    seed: int = 0

    def validate(self, mode="correlation"):
        if mode == "correlation":
            if self.t is None or not 0.0 < self.t < 1.0:
                raise ConfigError(f"correlation threshold must lie in (0, 1), got {self.t}")
        if self.p0 < 1:
            raise ConfigError(f"p0 must be >= 1, got {self.p0}")
        if self.p_max is not None and self.p_max < self.p0:
            raise ConfigError(f"p_max={self.p_max} is smaller than p0={self.p0}")
        if not self.growth > 1.0:
            raise ConfigError(f"growth must exceed 1, got {self.growth}")
        if self.threads < 1:
            raise ConfigError(f"threads must be >= 1, got {self.threads}")
        if self.candidate_budget is not None and self.candidate_budget < 0:
            raise ConfigError("candidate_budget must be non-negative")

    def resolve(self, max_rank: int, n: int) -> "TcorConfig":
        p_max = min(100, max_rank) if self.p_max is None else min(self.p_max, max_rank)
        return replace(
            self,
            p0=min(self.p0, p_max),
            p_max=p_max,
            candidate_budget=10 * n if self.candidate_budget is None else self.candidate_budget,
        )


def _config(cfg, **kwargs) -> TcorConfig:
    if cfg is None:
        return TcorConfig(**kwargs)
    if isinstance(cfg, TcorConfig):
        return replace(cfg, **kwargs) if kwargs else cfg
    return TcorConfig(t=float(cfg), **kwargs)


def savings_estimate(n: int, m: int, ell: int, p: int) -> float:
    """Ratio of brute-force work ``n^2 m`` to pruned work ``n p ell``."""
    if ell <= 0:
        return math.inf
    return n * m / (ell * p)


def _empty_state(n, threshold, slack):
    # zero operator: every projected distance is zero
    return prune.PruningState(np.arange(n), np.zeros((n, 1), order="F"), math.inf, n - 1, threshold, slack)


def _prune(op, cfg: TcorConfig, threshold: float, slack: float, diag: Diagnostics):
    """Steps shared by both modes: SVD, ordering, run length, rank growth, candidates."""
    m, n = op.shape
    svd = truncated_svd(op, cfg.p0, tol=cfg.tol, max_iter=cfg.max_iter,
                        method=cfg.svd_method, seed=cfg.seed)
    diag.svd_method = svd.method
    if svd.p == 0:
        state = _empty_state(n, threshold, slack)
    else:
        state = prune.prepare(svd, threshold, slack)
    diag.p_initial = max(svd.p, 1)
    diag.ell = state.ell
    diag.savings_estimate = savings_estimate(n, m, state.ell, diag.p_initial)
    diag.ranks.append(svd.p)

    est = prune.estimate_adjacent_count(state.G, threshold, slack)
    diag.adjacent_counts.append(est)
    prev = None
    while (svd.p > 0 and est > cfg.candidate_budget and svd.p < cfg.p_max
           and not svd.rank_deficient
           and (prev is None or prev - est > cfg.improvement_floor * prev)):
        p_new = min(max(int(math.ceil(svd.p * cfg.growth)), svd.p + 1), cfg.p_max)
        svd = extend(svd, op, p_new, tol=cfg.tol, max_iter=cfg.max_iter, seed=cfg.seed)
        state = state.with_projection(prune.scaled_projection(svd, state.perm))
        prev, est = est, prune.estimate_adjacent_count(state.G, threshold, slack)
        diag.ranks.append(svd.p)
        diag.adjacent_counts.append(est)

    diag.p_final = svd.p
    diag.rank_deficient = svd.rank_deficient
    cand = prune.generate_candidates(state, threads=cfg.threads)
    diag.tests_per_round.append(cand.tests)
    diag.candidate_count = len(cand)
    diag.evaluated_count = len(cand)
    diag.evaluated_fraction = len(cand) / (n * (n - 1) / 2)
    return cand


def tcor(A, cfg=None, **kwargs) -> ThresholdedResult:
    """All column pairs with Pearson correlation ``>= t``.

    ``cfg`` is a :class:`TcorConfig` or just the threshold ``t``; keyword
    arguments override config fields. Constant columns raise
    :class:`~tcor.errors.ConstantColumnError`; drop them first.
    """
    cfg = _config(cfg, **kwargs)
    cfg.validate("correlation")
    A = as_matrix(A)
    if A.n < 2:
        raise ConfigError("need at least two columns")
    stats = column_stats(A)
    op = CenteredScaledOperator(A, stats)
    cfg = cfg.resolve(op.max_rank, A.n)
    diag = Diagnostics(m=A.m, n=A.n)
    cand = _prune(op, cfg, prune.correlation_threshold(cfg.t), prune.SLACK, diag)
    out = filter_candidates(A, stats, cand, cfg.t, threads=cfg.threads)
    out.diagnostics = diag
    return out


def tdist(A, d: float, cfg=None, **kwargs) -> ThresholdedResult:
    """All column pairs with Euclidean distance ``<= d`` over the raw columns."""
    cfg = _config(cfg, **kwargs)
    cfg.validate("distance")
    if not d > 0:
        raise ConfigError(f"distance threshold must be positive, got {d}")
    A = as_matrix(A)
    if A.n < 2:
        raise ConfigError("need at least two columns")
    op = RawOperator(A)
    cfg = cfg.resolve(op.max_rank, A.n)
    diag = Diagnostics(m=A.m, n=A.n)
    slack = prune.SLACK * max(1.0, d * d)
    cand = _prune(op, cfg, d * d, slack, diag)
    out = filter_distance(A, cand, d, threads=cfg.threads)
    out.diagnostics = diag
    return out


def _normalize_mode(mode):
    if mode in ("correlation", "cor"):
        return "correlation"
    if mode in ("distance", "dist"):
        return "distance"
    raise ConfigError(f"unknown mode {mode!r}")


def brute_force_threshold(A, t: float, mode: str = "correlation", max_n: int | None = BRUTE_FORCE_MAX_N,
                          block: int = 512) -> ThresholdedResult:
    """Reference answer from the full Gram matrix, built in row blocks.

    In distance mode ``t`` is the distance threshold. ``max_n=None``
    disables the size guard.
    """
    mode = _normalize_mode(mode)
    A = as_matrix(A)
    n = A.n
    if max_n is not None and n > max_n:
        raise SizeGuardError(f"brute force refused for n={n} > {max_n}; pass max_n=None to override")
    start = time.perf_counter()
    if mode == "correlation":
        X = standardize(A)
    else:
        X = np.asfortranarray(A.values)
        sq = np.einsum("ij,ij->j", X, X)
    parts_i, parts_j, parts_v = [], [], []
    for lo in range(0, n, block):
        hi = min(lo + block, n)
        gram = X[:, lo:hi].T @ X[:, lo:]
        if mode == "correlation":
            vals = gram
            hit = vals >= t
        else:
            vals = sq[lo:hi, None] + sq[None, lo:] - 2.0 * gram
            # loose screen on the expanded form; exact distances decide below
            hit = vals <= t * t * (1 + 1e-9) + 1e-9 * (sq[lo:hi, None] + sq[None, lo:])
        r, c = np.nonzero(hit)
        gi = r + lo
        gj = c + lo
        upper = gj > gi
        gi, gj = gi[upper], gj[upper]
        parts_i.append(gi)
        parts_j.append(gj)
        if mode == "correlation":
            parts_v.append(np.clip(vals[r[upper], c[upper]], -1.0, 1.0))
        else:
            diff = X[:, gi] - X[:, gj]
            parts_v.append(np.sqrt(np.einsum("ij,ij->j", diff, diff)))
    i = np.concatenate(parts_i).astype(np.int64)
    j = np.concatenate(parts_j).astype(np.int64)
    v = np.concatenate(parts_v)
    if mode == "distance":
        keep = v <= t
        i, j, v = i[keep], j[keep], v[keep]
    order = np.lexsort((j, i))
    diag = Diagnostics(m=A.m, n=n, candidate_count=n * (n - 1) // 2,
                       evaluated_count=n * (n - 1) // 2, evaluated_fraction=1.0,
                       svd_method="none")
    diag.wall_seconds = time.perf_counter() - start
    return ThresholdedResult(i[order], j[order], v[order], diag)
