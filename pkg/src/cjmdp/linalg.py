"""Dense linear algebra over GF(q).

Small matrices (decoder systems, Sylvester matrices) use pure-Python row
reduction on lists of ints.  :func:`batch_det` evaluates many same-shape
determinants at once with numpy, which is what the code search needs.
"""

from __future__ import annotations

from itertools import permutations
from typing import Sequence

import numpy as np

from .gf import GF, FieldMismatchError

Rows = list[list[int]]


class InconsistentSystemError(ArithmeticError):
    """A linear system that should be consistent (erasure channel) is not."""


class GFMatrix:
    """Row-major matrix of field elements bound to a field."""

    __slots__ = ("field", "rows")

    def __init__(self, field: GF, rows: Sequence[Sequence[int]]):
        self.field = field
        self.rows = [[field.check(int(x)) for x in row] for row in rows]
        if self.rows and len({len(r) for r in self.rows}) != 1:
            raise ValueError("ragged matrix")

    @classmethod
    def zeros(cls, field: GF, nrows: int, ncols: int) -> GFMatrix:
        m = cls.__new__(cls)
        m.field = field
        m.rows = [[0] * ncols for _ in range(nrows)]
        return m

    @classmethod
    def identity(cls, field: GF, size: int) -> GFMatrix:
        m = cls.zeros(field, size, size)
        for i in range(size):
            m.rows[i][i] = 1
        return m

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        return self.rows[i][j]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GFMatrix) and self.field == other.field and self.rows == other.rows

    def __repr__(self) -> str:
        return f"GFMatrix({self.field!r}, {self.rows})"

    def tolist(self) -> Rows:
        return [list(r) for r in self.rows]

    def to_numpy(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64).reshape(self.shape)

    def columns(self, cols: Sequence[int]) -> GFMatrix:
        return GFMatrix(self.field, [[r[c] for c in cols] for r in self.rows])

    def block(self, r0: int, r1: int, c0: int, c1: int) -> GFMatrix:
        return GFMatrix(self.field, [row[c0:c1] for row in self.rows[r0:r1]])

    def _same(self, other: GFMatrix) -> None:
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field!r} vs {other.field!r}")

    def __matmul__(self, other: GFMatrix) -> GFMatrix:
        self._same(other)
        cols = list(zip(*other.rows))
        return GFMatrix(self.field, [[self.field.dot(r, c) for c in cols] for r in self.rows])

    def apply(self, x: Sequence[int]) -> list[int]:
        return [self.field.dot(r, x) for r in self.rows]

    def det(self) -> int:
        return det(self.field, self.rows)

    def rank(self) -> int:
        return rank(self.field, self.rows)


def _copy(rows: Sequence[Sequence[int]]) -> Rows:
    return [list(r) for r in rows]


def rref(F: GF, rows: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[Rows, list[int]]:
    """Reduced row echelon form.

    Pivots are searched only in the first ``ncols`` columns (default: all),
    so an augmented right-hand side can ride along.
    """
    A = _copy(rows)
    if not A:
        return A, []
    width = len(A[0]) if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    m = len(A)
    for c in range(width):
        piv = next((i for i in range(r, m) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        row = A[r]
        inv = F.inv(row[c])
        if inv != 1:
            A[r] = row = [F.mul(x, inv) for x in row]
        for i in range(m):
            if i != r and A[i][c]:
                f = A[i][c]
                other = A[i]
                A[i] = [F.sub(x, F.mul(f, y)) if y else x for x, y in zip(other, row)]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A, pivots


def rank(F: GF, rows: Sequence[Sequence[int]]) -> int:
    return len(rref(F, rows)[1])


def det(F: GF, rows: Sequence[Sequence[int]]) -> int:
    """Determinant by Gaussian elimination."""
    A = _copy(rows)
    n = len(A)
    if any(len(r) != n for r in A):
        raise ValueError("determinant of a non-square matrix")
    result = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            result = F.neg(result)
        pv = A[c][c]
        result = F.mul(result, pv)
        inv = F.inv(pv)
        for i in range(c + 1, n):
            if A[i][c]:
                f = F.mul(A[i][c], inv)
                A[i] = [F.sub(x, F.mul(f, y)) if y else x for x, y in zip(A[i], A[c])]
    return result


def det_laplace(F: GF, rows: Sequence[Sequence[int]]) -> int:
    """Determinant by the Leibniz permutation expansion (reference only)."""
    n = len(rows)
    total = 0
    for perm in permutations(range(n)):
        term = 1
        for i, j in enumerate(perm):
            term = F.mul(term, rows[i][j])
            if not term:
                break
        if not term:
            continue
        inversions = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        total = F.add(total, F.neg(term) if inversions % 2 else term)
    return total


def determined(F: GF, A: Sequence[Sequence[int]], b: Sequence[int]) -> dict[int, int]:
    """Solve ``A x = b`` for every unknown whose value is forced.

    Returns ``{column index: value}`` for unknowns that take the same value
    in every solution, i.e. whose column is not in the span of the others.
    Raises :class:`InconsistentSystemError` if no solution exists.
    """
    if not A:
        return {}
    n = len(A[0])
    aug = [list(r) + [bi] for r, bi in zip(A, b)]
    R, pivots = rref(F, aug, ncols=n)
    for row in R[len(pivots):]:
        if row[n]:
            raise InconsistentSystemError("linear system has no solution")
    pivot_set = set(pivots)
    free = [c for c in range(n) if c not in pivot_set]
    out = {}
    for i, c in enumerate(pivots):
        row = R[i]
        if all(row[f] == 0 for f in free):
            out[c] = row[n]
    return out


def solve_unique(F: GF, A: Sequence[Sequence[int]], b: Sequence[int]) -> list[int] | None:
    """The unique solution of ``A x = b``, or ``None`` when A lacks full column rank.

    An inconsistent system raises :class:`InconsistentSystemError`.
    """
    n = len(A[0]) if A else 0
    sol = determined(F, A, b)
    if len(sol) < n:
        return None
    return [sol[c] for c in range(n)]


def nullspace(F: GF, rows: Sequence[Sequence[int]], ncols: int | None = None) -> Rows:
    """Basis of the right kernel, one vector per free column."""
    if not rows:
        return [[1 if i == j else 0 for i in range(ncols or 0)] for j in range(ncols or 0)]
    n = len(rows[0])
    R, pivots = rref(F, rows)
    pivot_set = set(pivots)
    basis = []
    for f in range(n):
        if f in pivot_set:
            continue
        v = [0] * n
        v[f] = 1
        for i, c in enumerate(pivots):
            if R[i][f]:
                v[c] = F.neg(R[i][f])
        basis.append(v)
    return basis


def batch_det(F: GF, mats: np.ndarray) -> np.ndarray:
    """Determinants of a stack of square matrices, shape ``(B, m, m)``."""
    A = np.array(mats, dtype=np.int64, copy=True)
    B, m, _ = A.shape
    result = np.ones(B, dtype=np.int64)
    idx = np.arange(B)
    for c in range(m):
        nz = A[:, c:, c] != 0
        piv = c + nz.argmax(axis=1)
        swap = piv != c
        if swap.any():
            top = A[idx, c].copy()
            A[idx, c] = A[idx, piv]
            A[idx, piv] = top
            result = np.where(swap, F.vneg(result), result)
        pv = A[:, c, c]
        result = F.vmul(result, pv)
        if c + 1 == m:
            break
        factors = F.vmul(A[:, c + 1:, c], F.vinv(pv)[:, None])
        update = F.vmul(factors[:, :, None], A[:, None, c, c:])
        A[:, c + 1:, c:] = F.vsub(A[:, c + 1:, c:], update)
    return result
