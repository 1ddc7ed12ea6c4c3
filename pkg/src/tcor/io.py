"""Loading, validating and summarising dense data matrices.

Rows are observations, columns are the variables being correlated.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np

from .errors import AllColumnsConstantError, ConstantColumnError, InputError

CONST_RTOL = 1e-12


@dataclass(frozen=True)
class DataMatrix:
    """Dense m x n float64 matrix stored column-contiguous (Fortran order)."""

    values: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.values, dtype=np.float64)
        if a.ndim != 2:
            raise InputError(f"expected a 2-d matrix, got {a.ndim}-d")
        if a.shape[0] < 2 or a.shape[1] < 1:
            raise InputError(f"matrix too small: {a.shape[0]}x{a.shape[1]}")
        bad = ~np.isfinite(a)
        if bad.any():
            r, c = np.argwhere(bad)[0]
            raise InputError(f"non-finite entry {a[r, c]!r} at row {r}, column {c}")
        a = np.asfortranarray(a)
        a.setflags(write=False)
        object.__setattr__(self, "values", a)

    @property
    def m(self) -> int:
        return self.values.shape[0]

    @property
    def n(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self):
        return self.values.shape


@dataclass(frozen=True)
class ColumnStats:
    means: np.ndarray
    centered_norms: np.ndarray

    @property
    def n(self) -> int:
        return self.means.shape[0]


def as_matrix(A) -> DataMatrix:
    return A if isinstance(A, DataMatrix) else DataMatrix(A)


def load_csv(path, has_header: bool = False, transpose: bool = False) -> DataMatrix:
    """Read a comma-separated numeric file.

    Parse errors report the 1-based line and column of the offending cell.
    With ``transpose`` the file's rows become columns of the result.
    """
    rows = []
    width = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if has_header and lineno == 1:
                continue
            line = line.strip()
            if not line:
                continue
            cells = line.split(",")
            if width is None:
                width = len(cells)
            elif len(cells) != width:
                raise InputError(
                    f"{path}: line {lineno} has {len(cells)} fields, expected {width}"
                )
            row = []
            for col, cell in enumerate(cells, start=1):
                try:
                    x = float(cell)
                except ValueError:
                    raise InputError(
                        f"{path}: cannot parse {cell.strip()!r} at line {lineno}, column {col}"
                    ) from None
                if not np.isfinite(x):
                    raise InputError(
                        f"{path}: non-finite value {cell.strip()!r} at line {lineno}, column {col}"
                    )
                row.append(x)
            rows.append(row)
    if not rows:
        raise InputError(f"{path}: no data rows")
    a = np.array(rows, dtype=np.float64)
    if transpose:
        a = a.T
    if a.shape[0] < 2 or a.shape[1] < 2:
        raise InputError(f"{path}: need at least 2 rows and 2 columns, got {a.shape[0]}x{a.shape[1]}")
    return DataMatrix(a)


def read_sidecar(path):
    """Return (m, n) from the ``<path>.json`` sidecar of a binary matrix."""
    side = os.fspath(path) + ".json"
    try:
        with open(side, "r", encoding="utf-8") as fh:
            meta = json.load(fh)
        return int(meta["m"]), int(meta["n"])
    except FileNotFoundError:
        raise InputError(f"no dimensions given and no sidecar {side}") from None
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed sidecar {side}: {exc}") from None


def load_binary(path, m: int | None = None, n: int | None = None) -> DataMatrix:
    """Read little-endian float64 values stored column-major.

    Dimensions come from the arguments or, if omitted, the JSON sidecar.
    """
    if m is None or n is None:
        m, n = read_sidecar(path)
    size = os.path.getsize(path)
    if size != 8 * m * n:
        raise InputError(f"{path}: {size} bytes does not match {m}x{n} float64 ({8 * m * n} bytes)")
    flat = np.fromfile(path, dtype="<f8")
    return DataMatrix(flat.reshape((m, n), order="F"))


def save_binary(A, path, sidecar: bool = True) -> None:
    A = as_matrix(A)
    A.values.astype("<f8").ravel(order="F").tofile(path)
    if sidecar:
        with open(os.fspath(path) + ".json", "w", encoding="utf-8") as fh:
            json.dump({"m": A.m, "n": A.n}, fh)


def _raw_stats(a: np.ndarray):
    means = a.mean(axis=0)
    # two-pass form; algebraically sqrt(sum a^2 - m*mean^2) without the cancellation
    centered = np.sqrt(((a - means) ** 2).sum(axis=0))
    eps = CONST_RTOL * float(np.sqrt((a * a).sum(axis=0)).max())
    return means, centered, eps


def constant_columns(A) -> np.ndarray:
    _, centered, eps = _raw_stats(as_matrix(A).values)
    return np.flatnonzero(centered <= eps)


def column_stats(A) -> ColumnStats:
    """Column means and centered norms; raises if any column is constant."""
    means, centered, eps = _raw_stats(as_matrix(A).values)
    bad = np.flatnonzero(centered <= eps)
    if bad.size:
        raise ConstantColumnError(bad)
    return ColumnStats(means=means, centered_norms=centered)


def drop_constant_columns(A):
    """Remove constant columns.

    Returns the reduced matrix and ``kept``, where ``kept[k]`` is the
    original index of new column ``k``.
    """
    A = as_matrix(A)
    _, centered, eps = _raw_stats(A.values)
    kept = np.flatnonzero(centered > eps)
    if kept.size == 0:
        raise AllColumnsConstantError()
    if kept.size == A.n:
        return A, kept
    return DataMatrix(A.values[:, kept]), kept


def standardize(A, stats: ColumnStats | None = None) -> np.ndarray:
    """Materialise the zero-mean, unit-norm version of ``A`` (small inputs only)."""
    A = as_matrix(A)
    stats = column_stats(A) if stats is None else stats
    return (A.values - stats.means) / stats.centered_norms
