"""Truncated SVD of a centered and scaled matrix, without forming it.

The primary solver is an augmented, implicitly restarted Lanczos
bidiagonalization with full reorthogonalization. Small problems use a
dense SVD of the materialised matrix instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, ConvergenceError
from .io import ColumnStats, DataMatrix, as_matrix, column_stats

RANK_RTOL = 1e-12
DENSE_LIMIT = 200


class CenteredScaledOperator:
    """Linear operator for B = (A - e z^T) W with W = diag(1 / centered_norms)."""

    def __init__(self, matrix, stats: ColumnStats | None = None):
        self.matrix = as_matrix(matrix)
        self.stats = column_stats(self.matrix) if stats is None else stats
        if self.stats.n != self.matrix.n:
            raise ConfigError("column stats do not match the matrix")
        self._a = self.matrix.values
        self._z = self.stats.means
        self._w = 1.0 / self.stats.centered_norms

    @property
    def shape(self):
        return self._a.shape

    @property
    def max_rank(self) -> int:
        # centering removes one dimension from the column space
        m, n = self.shape
        return min(m - 1, n)

    def apply(self, x):
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.shape[1],):
            raise ConfigError(f"apply: expected length {self.shape[1]}, got {x.shape}")
        wx = x * self._w
        return self._a @ wx - float(self._z @ wx)

    def apply_transpose(self, y):
        y = np.asarray(y, dtype=np.float64)
        if y.shape != (self.shape[0],):
            raise ConfigError(f"apply_transpose: expected length {self.shape[0]}, got {y.shape}")
        return (self._a.T @ y - self._z * y.sum()) * self._w

    def materialize(self) -> np.ndarray:
        return (self._a - self._z) * self._w


class RawOperator:
    """The matrix itself, for Euclidean distance thresholding."""

    def __init__(self, matrix):
        self.matrix = as_matrix(matrix)
        self._a = self.matrix.values

    @property
    def shape(self):
        return self._a.shape

    @property
    def max_rank(self) -> int:
        return min(self.shape)

    def apply(self, x):
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.shape[1],):
            raise ConfigError(f"apply: expected length {self.shape[1]}, got {x.shape}")
        return self._a @ x

    def apply_transpose(self, y):
        y = np.asarray(y, dtype=np.float64)
        if y.shape != (self.shape[0],):
            raise ConfigError(f"apply_transpose: expected length {self.shape[0]}, got {y.shape}")
        return self._a.T @ y

    def materialize(self) -> np.ndarray:
        return np.array(self._a)


@dataclass
class _LanczosState:
    V: np.ndarray
    W: np.ndarray
    s: np.ndarray
    R: np.ndarray
    f: np.ndarray


@dataclass
class TruncatedSVD:
    """Leading singular triplets; ``V`` is n x p, ``U`` is m x p."""

    singular_values: np.ndarray
    V: np.ndarray
    U: np.ndarray | None
    rank_deficient: bool = False
    method: str = "dense"
    iterations: int = 0
    _full: tuple | None = field(default=None, repr=False)
    _state: _LanczosState | None = field(default=None, repr=False)

    @property
    def p(self) -> int:
        return self.singular_values.shape[0]

    @property
    def s(self) -> np.ndarray:
        return self.singular_values


def _check_rank(op, p):
    if not 1 <= p <= op.max_rank:
        raise ConfigError(f"rank p={p} outside [1, {op.max_rank}]")


def _numerical_rank(s):
    if s.size == 0 or s[0] <= 0:
        return 0
    return int(np.count_nonzero(s > RANK_RTOL * s[0]))


def _dense(op, p):
    U, s, Vt = np.linalg.svd(op.materialize(), full_matrices=False)
    r = _numerical_rank(s)
    full = (U[:, :r], s[:r], Vt[:r].T)
    return _slice_dense(full, p)


def _slice_dense(full, p):
    U, s, V = full
    k = min(p, s.shape[0])
    return TruncatedSVD(
        singular_values=s[:k].copy(),
        V=np.ascontiguousarray(V[:, :k]),
        U=np.ascontiguousarray(U[:, :k]),
        rank_deficient=k < p,
        method="dense",
        _full=full,
    )


def _orthogonalize(x, Q):
    # classical Gram-Schmidt, applied twice
    if Q.shape[1]:
        x = x - Q @ (Q.T @ x)
        x = x - Q @ (Q.T @ x)
    return x


def _fresh_direction(Q, dim, rng):
    for _ in range(5):
        x = _orthogonalize(rng.standard_normal(dim), Q)
        nrm = np.linalg.norm(x)
        if nrm > 1e-8:
            return x / nrm
    raise ConvergenceError("could not extend an orthonormal basis")


def _irlba(op, nu, tol, max_iter, rng, restart=None):
    m, n = op.shape
    work = min(max(nu + 10, 2 * nu), min(m, n))
    V = np.zeros((n, work))
    W = np.zeros((m, work))
    B = np.zeros((work, work))
    if restart is not None:
        k = min(restart.s.shape[0], work - 1)
        V[:, :k] = restart.V[:, :k]
        W[:, :k] = restart.W[:, :k]
        B[:k, :k] = np.diag(restart.s[:k])
        B[:k, k] = restart.R[:k]
        V[:, k] = _orthogonalize(restart.f, V[:, :k])
        V[:, k] /= np.linalg.norm(V[:, k])
        smax = float(restart.s[0])
    else:
        k = 0
        v0 = rng.standard_normal(n)
        V[:, 0] = v0 / np.linalg.norm(v0)
        smax = 0.0
    best = np.inf
    for it in range(1, max_iter + 1):
        j = k
        w = op.apply(V[:, j])
        if k:
            w -= W[:, :k] @ B[:k, k]
        w = _orthogonalize(w, W[:, :j])
        a = np.linalg.norm(w)
        scale = max(smax, a, 1.0)
        if a <= 1e-14 * scale:
            W[:, j], a = _fresh_direction(W[:, :j], m, rng), 0.0
        else:
            W[:, j] = w / a
        B[j, j] = a
        while True:
            f = op.apply_transpose(W[:, j]) - a * V[:, j]
            f = _orthogonalize(f, V[:, : j + 1])
            if j + 1 >= work:
                break
            b = np.linalg.norm(f)
            if b <= 1e-14 * scale:
                V[:, j + 1], b = _fresh_direction(V[:, : j + 1], n, rng), 0.0
            else:
                V[:, j + 1] = f / b
            B[j, j + 1] = b
            w = op.apply(V[:, j + 1]) - b * W[:, j]
            w = _orthogonalize(w, W[:, : j + 1])
            a = np.linalg.norm(w)
            scale = max(scale, a, b)
            if a <= 1e-14 * scale:
                W[:, j + 1], a = _fresh_direction(W[:, : j + 1], m, rng), 0.0
            else:
                W[:, j + 1] = w / a
            B[j + 1, j + 1] = a
            j += 1

        Ub, sb, Vbt = np.linalg.svd(B)
        rf = np.linalg.norm(f)
        R = rf * Ub[-1, :]
        smax = max(smax, sb[0])
        resid = np.abs(R[:nu])
        best = min(best, float(resid.max() / smax) if smax > 0 else 0.0)
        done = bool(np.all(resid <= tol * smax))
        keep = nu if done else min(nu, work - 1)
        Vr = V @ Vbt[:keep].T
        Wr = W @ Ub[:, :keep]
        fdir = f / rf if rf > 0 else _fresh_direction(Vr, n, rng)
        if done:
            state = _LanczosState(V=Vr, W=Wr, s=sb[:nu].copy(), R=R[:nu].copy(), f=fdir)
            return sb[:nu].copy(), Vr, Wr, state, it
        k = keep
        V[:] = 0.0
        W[:] = 0.0
        B[:] = 0.0
        V[:, :k] = Vr
        W[:, :k] = Wr
        B[:k, :k] = np.diag(sb[:k])
        B[:k, k] = R[:k]
        V[:, k] = _orthogonalize(fdir, Vr)
        V[:, k] /= np.linalg.norm(V[:, k])
    raise ConvergenceError(
        f"Lanczos SVD did not converge in {max_iter} restarts (best relative residual {best:.3g})",
        best_residual=best,
    )


def _finish_lanczos(s, V, U, state, iterations, p):
    r = _numerical_rank(s)
    k = min(p, r)
    return TruncatedSVD(
        singular_values=s[:k].copy(),
        V=np.ascontiguousarray(V[:, :k]),
        U=np.ascontiguousarray(U[:, :k]),
        rank_deficient=k < p,
        method="lanczos",
        iterations=iterations,
        _state=state,
    )


def truncated_svd(op, p: int, tol: float = 1e-8, max_iter: int = 1000,
                  method: str = "auto", seed: int = 0) -> TruncatedSVD:
    """Rank-``p`` truncated SVD of ``op``.

    ``method`` is ``"lanczos"``, ``"dense"``, or ``"auto"`` (dense when
    ``min(m, n) <= 200``). Singular values at or below ``1e-12 * s[0]``
    are dropped and ``rank_deficient`` is set.
    """
    if isinstance(op, (DataMatrix, np.ndarray)):
        op = CenteredScaledOperator(op)
    _check_rank(op, p)
    if method == "auto":
        method = "dense" if min(op.shape) <= DENSE_LIMIT else "lanczos"
    if method == "dense":
        return _dense(op, p)
    if method != "lanczos":
        raise ConfigError(f"unknown SVD method {method!r}")
    rng = np.random.default_rng(seed)
    s, V, U, state, it = _irlba(op, p, tol, max_iter, rng)
    return _finish_lanczos(s, V, U, state, it, p)


def _align_signs(new: TruncatedSVD, old: TruncatedSVD) -> TruncatedSVD:
    k = min(old.p, new.p)
    flip = np.sign(np.einsum("ij,ij->j", new.V[:, :k], old.V[:, :k]))
    flip[flip == 0] = 1.0
    sign = np.ones(new.p)
    sign[:k] = flip
    new.V *= sign
    if new.U is not None:
        new.U *= sign
    return new


def extend(svd: TruncatedSVD, op, p_new: int, tol: float = 1e-8, max_iter: int = 1000,
           seed: int = 0) -> TruncatedSVD:
    """Grow a factorization to rank ``p_new``, reusing the existing factors.

    Column signs are aligned with the input so the leading vectors stay
    comparable across rounds.
    """
    if p_new <= svd.p:
        raise ConfigError(f"p_new={p_new} must exceed current rank {svd.p}")
    _check_rank(op, p_new)
    if svd.rank_deficient:
        return svd
    if svd._full is not None:
        out = _slice_dense(svd._full, p_new)
    elif svd._state is not None:
        rng = np.random.default_rng(seed + svd.p)
        s, V, U, state, it = _irlba(op, p_new, tol, max_iter, rng, restart=svd._state)
        out = _finish_lanczos(s, V, U, state, it, p_new)
    else:
        out = truncated_svd(op, p_new, tol=tol, max_iter=max_iter, method="lanczos", seed=seed)
    return _align_signs(out, svd)
