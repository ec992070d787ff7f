"""Exact rational linear algebra on top of :class:`fractions.Fraction`.

Matrices are numpy arrays of dtype ``object`` holding Fractions, so that
``@``, ``trace`` and slicing behave as for float arrays.  Rank, kernel and
membership routines are plain Gaussian elimination; the sizes met in this
package (a few hundred rows at most) keep that cheap enough.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np


def frac(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (float, np.floating)):
        return Fraction(value).limit_denominator(10**12)
    if isinstance(value, str):
        return Fraction(value)
    return Fraction(int(value))


def qmatrix(rows) -> np.ndarray:
    """Return a 2-D object array of Fractions built from nested sequences."""
    arr = np.asarray(rows, dtype=object)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    out = np.empty(arr.shape, dtype=object)
    for idx, val in np.ndenumerate(arr):
        out[idx] = frac(val)
    return out


def qzeros(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def qeye(n: int) -> np.ndarray:
    out = qzeros((n, n))
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def is_exact(a: np.ndarray) -> bool:
    return a.dtype == object


def is_zero(a: np.ndarray) -> bool:
    return all(v == 0 for v in np.asarray(a).flat)


def to_float(a: np.ndarray) -> np.ndarray:
    return np.asarray(a, dtype=float) if is_exact(a) else np.asarray(a)


def _rows(mat) -> list[list[Fraction]]:
    arr = np.asarray(mat, dtype=object)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    return [[frac(v) for v in row] for row in arr]


def rref(mat) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    rows = _rows(mat)
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        lead = rows[r][c]
        if lead != 1:
            rows[r] = [v / lead for v in rows[r]]
        prow = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(mat) -> int:
    arr = np.asarray(mat, dtype=object)
    if arr.size == 0:
        return 0
    basis = RowBasis(arr.shape[-1])
    for row in _rows(arr):
        basis.add(row)
    return basis.dim


def nullspace(mat) -> list[list[Fraction]]:
    """Basis of ``{v : mat @ v = 0}`` as a list of coordinate lists."""
    arr = np.asarray(mat, dtype=object)
    ncols = arr.shape[1]
    reduced, pivots = rref(arr) if arr.shape[0] else ([], [])
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve(mat, rhs) -> list[Fraction] | None:
    """One solution of ``mat @ v = rhs`` or ``None`` if inconsistent."""
    arr = np.asarray(mat, dtype=object)
    b = [frac(v) for v in np.asarray(rhs, dtype=object).flat]
    aug = np.concatenate([arr, np.asarray(b, dtype=object).reshape(-1, 1)], axis=1)
    reduced, pivots = rref(aug)
    ncols = arr.shape[1]
    if ncols in pivots:
        return None
    sol = [Fraction(0)] * ncols
    for row, p in zip(reduced, pivots):
        sol[p] = row[ncols]
    return sol


def inverse(mat) -> np.ndarray:
    arr = qmatrix(mat)
    n = arr.shape[0]
    aug = np.concatenate([arr, qeye(n)], axis=1)
    reduced, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(reduced) < n:
        raise ValueError("matrix is singular")
    return qmatrix([row[n:] for row in reduced])


class RowBasis:
    """Incrementally maintained echelon basis of a subspace of Q^dim."""

    def __init__(self, dim: int):
        self.ambient = dim
        self._rows: list[list[Fraction]] = []
        self._pivots: list[int] = []

    @property
    def dim(self) -> int:
        return len(self._rows)

    def reduce(self, vec: Sequence) -> list[Fraction]:
        v = [frac(x) for x in vec]
        for row, p in zip(self._rows, self._pivots):
            if v[p] != 0:
                f = v[p]
                v = [a - f * b for a, b in zip(v, row)]
        return v

    def contains(self, vec: Sequence) -> bool:
        return not any(self.reduce(vec))

    def add(self, vec: Sequence) -> bool:
        v = self.reduce(vec)
        p = next((i for i, x in enumerate(v) if x != 0), None)
        if p is None:
            return False
        lead = v[p]
        v = [x / lead for x in v]
        # keep rows fully reduced so membership stays a single pass
        for i, row in enumerate(self._rows):
            if row[p] != 0:
                f = row[p]
                self._rows[i] = [a - f * b for a, b in zip(row, v)]
        self._rows.append(v)
        self._pivots.append(p)
        return True

    def extend(self, vecs: Iterable[Sequence]) -> None:
        for v in vecs:
            self.add(v)

    def vectors(self) -> list[list[Fraction]]:
        return [list(r) for r in self._rows]


def numeric_rank(mat, rtol: float = 1e-8) -> int:
    """Rank by singular values above ``rtol`` times the largest one."""
    arr = to_float(np.asarray(mat))
    if arr.size == 0:
        return 0
    s = np.linalg.svd(arr, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def matrix_rank(mat, rtol: float = 1e-8) -> int:
    """Exact rank for Fraction matrices, thresholded SVD rank otherwise."""
    arr = np.asarray(mat)
    return rank(arr) if is_exact(arr) else numeric_rank(arr, rtol)
