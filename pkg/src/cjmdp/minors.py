"""Not-trivially-zero full-size minors and the distance properties they decide.

Column index sets follow the 1-based convention ``j_1 < ... < j_m`` in the
public generator :func:`nontrivial_column_sets`; cached numpy arrays used for
evaluation are 0-based.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import combinations, product
from typing import Iterator, Sequence

import numpy as np

from .code import (
    ConvCode,
    is_left_prime,
    partial_matrix,
    reverse_sliding_matrix,
    sliding_matrix,
)
from .linalg import batch_det, nullspace

ORACLE_LIMIT = 10**7


class Kind(enum.Enum):
    FORWARD = "forward"  # sliding matrix H_j
    REVERSE = "reverse"  # reverse sliding matrix ~H_j
    COMPLETE = "complete"  # partial parity-check matrix h_j


@dataclass(frozen=True)
class ColumnSetKind:
    """Which structured matrix, and its shape parameters."""

    kind: Kind
    n: int
    k: int
    nu: int
    j: int

    @property
    def rows(self) -> int:
        return (self.j + 1) * (self.n - self.k)

    @property
    def width(self) -> int:
        if self.kind is Kind.COMPLETE:
            return (self.nu + self.j + 1) * self.n
        return (self.j + 1) * self.n

    @classmethod
    def of(cls, kind: Kind, code: ConvCode, j: int) -> ColumnSetKind:
        return cls(kind, code.n, code.k, code.nu, j)


class OracleTooLarge(ValueError):
    """The exhaustive column-distance enumeration exceeds its budget."""


@dataclass
class PropertyReport:
    property: str
    j: int
    holds: bool
    counterexample: tuple[int, ...] | None = None
    minors_checked: int = 0
    reason: str | None = dc_field(default=None, compare=False)

    def to_dict(self) -> dict:
        out = {
            "property": self.property,
            "j": self.j,
            "holds": self.holds,
            "counterexample_columns": list(self.counterexample) if self.counterexample else None,
            "minors_checked": self.minors_checked,
        }
        if self.reason:
            out["reason"] = self.reason
        return out


# structural side ------------------------------------------------------------


def index_condition(kind: ColumnSetKind, cols: Sequence[int]) -> bool:
    """Index test on a sorted 1-based column list."""
    r, n, nu = kind.n - kind.k, kind.n, kind.nu
    for s in range(1, kind.j + 1):
        if kind.kind in (Kind.REVERSE, Kind.COMPLETE) and not cols[r * s] > s * n:
            return False
        if kind.kind is Kind.FORWARD and not cols[r * s - 1] <= s * n:
            return False
        if kind.kind is Kind.COMPLETE and not cols[r * s - 1] <= s * n + nu * n:
            return False
    return True


def nontrivial_column_sets(kind: ColumnSetKind) -> Iterator[tuple[int, ...]]:
    """Yield, in lexicographic order, the 1-based full-size column sets passing the index test."""
    for cols in combinations(range(1, kind.width + 1), kind.rows):
        if index_condition(kind, cols):
            yield cols


@lru_cache(maxsize=None)
def support(kind: ColumnSetKind) -> np.ndarray:
    """Boolean mask of positions where the block pattern places a coefficient entry."""
    r, n, nu, j = kind.n - kind.k, kind.n, kind.nu, kind.j
    mask = np.zeros((kind.rows, kind.width), dtype=bool)
    for br in range(j + 1):
        for bc in range(kind.width // n):
            offset = br - bc if kind.kind is Kind.FORWARD else bc - br
            if 0 <= offset <= nu:
                mask[br * r:(br + 1) * r, bc * n:(bc + 1) * n] = True
    return mask


def matching_size(mask: np.ndarray, cols: Sequence[int] | None = None) -> int:
    """Maximum bipartite matching between the given columns and the rows of ``mask``."""
    cols = range(mask.shape[1]) if cols is None else cols
    adj = [np.flatnonzero(mask[:, c]).tolist() for c in cols]
    owner: dict[int, int] = {}

    def augment(u: int, seen: set[int]) -> bool:
        for row in adj[u]:
            if row in seen:
                continue
            seen.add(row)
            if row not in owner or augment(owner[row], seen):
                owner[row] = u
                return True
        return False

    return sum(augment(u, set()) for u in range(len(adj)))


def has_nontrivial_term(sub: np.ndarray) -> bool:
    """Whether a square support pattern admits a permutation through nonzero positions."""
    sub = np.asarray(sub, dtype=bool)
    m = sub.shape[0]
    if sub.shape != (m, m):
        raise ValueError("support must be square")
    return matching_size(sub) == m


@lru_cache(maxsize=None)
def column_array(kind: ColumnSetKind) -> np.ndarray:
    """0-based nontrivial column sets, shape ``(S, rows)``.

    Sets passing the index test are additionally screened with the matching
    test, so a set is kept only if its minor has a structurally nonzero term.
    """
    mask = support(kind)
    keep = [
        [c - 1 for c in cols]
        for cols in nontrivial_column_sets(kind)
        if has_nontrivial_term(mask[:, [c - 1 for c in cols]])
    ]
    return np.array(keep, dtype=np.int64).reshape(len(keep), kind.rows)


# numeric side ---------------------------------------------------------------


def minors_of(code: ConvCode, matrix: np.ndarray, sets: np.ndarray) -> np.ndarray:
    """Values of the full-size minors of ``matrix`` on the column sets ``sets``."""
    if len(sets) == 0:
        return np.zeros(0, dtype=np.int64)
    stack = np.transpose(matrix[:, sets], (1, 0, 2))
    return batch_det(code.field, stack)


def _first_zero(code: ConvCode, matrix: np.ndarray, kind: ColumnSetKind) -> tuple[int, tuple[int, ...] | None]:
    sets = column_array(kind)
    vals = minors_of(code, matrix, sets)
    zeros = np.flatnonzero(vals == 0)
    if len(zeros) == 0:
        return len(sets), None
    i = int(zeros[0])
    return i + 1, tuple(int(c) + 1 for c in sets[i])


def _left_prime_report(name: str, j: int, checked: int, code: ConvCode) -> PropertyReport | None:
    if is_left_prime(code):
        return None
    return PropertyReport(name, j, False, None, checked, reason="parity-check matrix is not left prime")


def is_jth_distance_maximal(code: ConvCode, j: int) -> PropertyReport:
    """j-th column distance equals ``(n-k)(j+1)+1``, decided on the sliding matrix."""
    name = "column-distance"
    kind = ColumnSetKind.of(Kind.FORWARD, code, j)
    checked, bad = _first_zero(code, sliding_matrix(code, j).to_numpy(), kind)
    if bad is not None:
        return PropertyReport(name, j, False, bad, checked)
    return _left_prime_report(name, j, checked, code) or PropertyReport(name, j, True, None, checked)


def is_mdp(code: ConvCode) -> PropertyReport:
    rep = is_jth_distance_maximal(code, code.L)
    rep.property = "mdp"
    return rep


def is_reverse_mdp(code: ConvCode) -> PropertyReport:
    rep = is_mdp(code)
    rep.property = "reverse-mdp"
    if not rep.holds:
        return rep
    kind = ColumnSetKind.of(Kind.REVERSE, code, code.L)
    checked, bad = _first_zero(code, reverse_sliding_matrix(code).to_numpy(), kind)
    total = rep.minors_checked + checked
    return PropertyReport("reverse-mdp", code.L, bad is None, bad, total)


def is_complete_j_mdp(code: ConvCode, j: int) -> PropertyReport:
    """All nontrivial full-size minors of the partial parity-check matrix are nonzero, and H(z) is left prime."""
    if not 0 <= j <= code.L:
        raise ValueError(f"j must lie in 0..L={code.L}, got {j}")
    name = "complete-j-mdp"
    kind = ColumnSetKind.of(Kind.COMPLETE, code, j)
    checked, bad = _first_zero(code, partial_matrix(code, j).to_numpy(), kind)
    if bad is not None:
        return PropertyReport(name, j, False, bad, checked)
    return _left_prime_report(name, j, checked, code) or PropertyReport(name, j, True, None, checked)


def complete_index(code: ConvCode) -> int:
    """Largest ``j <= L`` for which the code is complete j-MDP, or -1."""
    best = -1
    for j in range(code.L + 1):
        if not is_complete_j_mdp(code, j).holds:
            break
        best = j
    return best


def column_distance_oracle(code: ConvCode, j: int) -> int:
    """Exact j-th column distance by enumerating the kernel of the sliding matrix."""
    F = code.field
    n = code.n
    basis = nullspace(F, sliding_matrix(code, j).rows)
    dim = len(basis)
    if F.q**dim > ORACLE_LIMIT:
        raise OracleTooLarge(f"{F.q}^{dim} kernel vectors exceed {ORACLE_LIMIT}")
    if not any(any(v[:n]) for v in basis):
        raise ValueError("no truncated codeword has a nonzero first block")
    B = np.array(basis, dtype=np.int64).reshape(dim, (j + 1) * n)
    inner_dim = 0
    while inner_dim < dim and F.q ** (inner_dim + 1) <= 200_000:
        inner_dim += 1
    inner = np.zeros((1, B.shape[1]), dtype=np.int64)
    scalars = np.arange(F.q, dtype=np.int64)
    for b in B[dim - inner_dim:]:
        scaled = F.vmul(scalars[:, None], b[None, :])
        inner = F.vadd(inner[None, :, :], scaled[:, None, :]).reshape(-1, B.shape[1])
    best = None
    for coeffs in product(range(F.q), repeat=dim - inner_dim):
        offset = np.zeros(B.shape[1], dtype=np.int64)
        for c, b in zip(coeffs, B[: dim - inner_dim]):
            if c:
                offset = F.vadd(offset, F.vmul(np.full_like(b, c), b))
        vecs = F.vadd(inner, offset[None, :])
        ok = (vecs[:, :n] != 0).any(axis=1)
        if not ok.any():
            continue
        w = int((vecs[ok] != 0).sum(axis=1).min())
        best = w if best is None else min(best, w)
    return best
