"""Exhaustive and randomized searches for complete j-MDP codes.

Candidates are evaluated in numpy batches: every nontrivial full-size minor
is computed for all surviving candidates at once and candidates with a zero
minor are dropped.  Minors of the smaller partial matrices come first since
a complete j-MDP code is complete i-MDP for every i <= j, so cheap failures
prune most of the space early.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from itertools import product
from typing import Sequence

import numpy as np

from .code import ConvCode, CodeParams, is_left_prime
from .gf import GF, field as make_field
from .linalg import batch_det
from .minors import ColumnSetKind, Kind, column_array, is_complete_j_mdp

MAX_EXHAUSTIVE = 10**8


class SearchTooLarge(ValueError):
    pass


@dataclass
class SearchSpec:
    """What to search for.

    With ``normalize`` (only for one parity row) the leading coefficient is
    fixed to the all-ones row; scaling a column by a nonzero constant does
    not change whether a minor vanishes, so nothing is lost.
    ``require_left_prime=None`` checks left-primeness only for ``j`` below
    the point where the minors already force it.
    """

    field: GF
    n: int = 2
    k: int = 1
    delta: int = 2
    j: int = 0
    normalize: bool = True
    mode: str = "exhaustive"
    trials: int = 0
    seed: int | None = None
    require_left_prime: bool | None = None
    extra_candidates: Sequence[Sequence[int]] = ()
    threads: int = 1
    prune: bool = True

    def __post_init__(self):
        self.params = CodeParams(self.n, self.k, self.delta)
        if self.normalize and self.n - self.k != 1:
            raise ValueError("normalization needs exactly one parity row")
        if not 0 <= self.j <= self.params.L:
            raise ValueError(f"j must lie in 0..L={self.params.L}")
        if self.mode not in ("exhaustive", "random"):
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def free_entries(self) -> int:
        p = self.params
        total = (p.nu + 1) * p.r * p.n
        return total - p.n if self.normalize else total

    @property
    def checks_left_prime(self) -> bool:
        if self.require_left_prime is not None:
            return self.require_left_prime
        return self.j < left_prime_implied_from(self.params)


def left_prime_implied_from(params: CodeParams) -> int:
    """Smallest j for which nonzero nontrivial minors already force left-primeness.

    The sliding matrix H_L (H_{L-1} when k also divides delta) sits inside the
    partial matrix of that index, and nonzero nontrivial minors there imply a
    left prime parity-check matrix.
    """
    return params.L - 1 if params.delta % params.k == 0 else params.L


@dataclass
class SearchReport:
    field: GF
    n: int
    k: int
    delta: int
    j: int
    candidates: int
    solutions: list[tuple[int, ...]]
    space: int
    mode: str = "exhaustive"
    seed: int | None = None
    elapsed_ms: float = 0.0
    normalized: bool = True
    stats: dict = dc_field(default_factory=dict)

    @property
    def count(self) -> int:
        return len(self.solutions)

    @property
    def percentage(self) -> float:
        return 100.0 * self.count / self.space if self.space else 0.0

    def codes(self) -> list[ConvCode]:
        return [solution_code(self.field, self.n, self.k, self.delta, s, self.normalized) for s in self.solutions]

    def to_dict(self, alpha: bool = False) -> dict:
        render = (lambda v: self.field.to_alpha(v)) if alpha else int
        out = {
            "field": self.field.spec(),
            "n": self.n,
            "k": self.k,
            "delta": self.delta,
            "j": self.j,
            "mode": self.mode,
            "candidates": self.candidates,
            "count": self.count,
            "percentage": round(self.percentage, 6),
            "solutions": [[render(v) for v in s] for s in self.solutions],
            "elapsed_ms": round(self.elapsed_ms, 3),
        }
        if self.seed is not None:
            out["seed"] = self.seed
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(**kw))

    def to_csv(self) -> str:
        lines = [",".join(f"c{i}" for i in range(len(self.solutions[0])))] if self.solutions else []
        lines += [",".join(map(str, s)) for s in self.solutions]
        return "\n".join(lines) + "\n"


def solution_code(F: GF, n: int, k: int, delta: int, free: Sequence[int], normalized: bool = True) -> ConvCode:
    flat = ([1] * n if normalized else []) + list(free)
    per = (n - k) * n
    blocks = [flat[i:i + per] for i in range(0, len(flat), per)]
    return ConvCode.from_display(F, n, k, delta, blocks)


# batched evaluation ------------------------------------------------------------


def _display_coeffs(spec: SearchSpec, cand: np.ndarray) -> np.ndarray:
    """Candidate array -> coefficients, shape ``(C, nu+1, n-k, n)``, index 0 = H_nu."""
    p = spec.params
    C = cand.shape[0]
    if spec.normalize:
        cand = np.concatenate([np.ones((C, p.n), dtype=np.int64), cand], axis=1)
    return cand.reshape(C, p.nu + 1, p.r, p.n)


def _partial_stack(disp: np.ndarray, j: int) -> np.ndarray:
    C, nu1, r, n = disp.shape
    nu = nu1 - 1
    M = np.zeros((C, (j + 1) * r, (nu + j + 1) * n), dtype=np.int64)
    for br in range(j + 1):
        for m in range(nu + 1):
            M[:, br * r:(br + 1) * r, (br + m) * n:(br + m + 1) * n] = disp[:, m]
    return M


def _resultants(F: GF, disp: np.ndarray) -> np.ndarray:
    C, nu1, _, _ = disp.shape
    nu = nu1 - 1
    S = np.zeros((C, 2 * nu, 2 * nu), dtype=np.int64)
    for col, base in ((0, 0), (1, nu)):
        coeffs = disp[:, :, 0, col]
        for s in range(nu):
            S[:, base + s, s:s + nu + 1] = coeffs
    return batch_det(F, S)


def _surviving(spec: SearchSpec, cand: np.ndarray, stats: dict | None = None) -> np.ndarray:
    """Boolean mask of candidates that are complete ``spec.j``-MDP."""
    F = spec.field
    p = spec.params
    alive = np.ones(len(cand), dtype=bool)
    if len(cand) == 0:
        return alive
    alive &= (cand != 0).all(axis=1)
    disp = _display_coeffs(spec, cand)
    if spec.checks_left_prime and alive.any():
        idx = np.flatnonzero(alive)
        if (p.n, p.k) == (2, 1) and p.nu > 0:
            alive[idx] = _resultants(F, disp[idx]) != 0
            # zero leading row makes the formal resultant vanish; fall back to gcd
            lead_zero = idx[(disp[idx, 0] == 0).all(axis=(1, 2))]
            for i in lead_zero:
                alive[i] = is_left_prime(solution_code(F, p.n, p.k, p.delta, cand[i], spec.normalize))
        else:
            for i in idx:
                alive[i] = is_left_prime(solution_code(F, p.n, p.k, p.delta, cand[i], spec.normalize))
    levels = range(spec.j + 1) if spec.prune else [spec.j]
    for jj in levels:
        sets = column_array(ColumnSetKind(Kind.COMPLETE, p.n, p.k, p.nu, jj))
        m = sets.shape[1]
        pos = 0
        while pos < len(sets):
            idx = np.flatnonzero(alive)
            if len(idx) == 0:
                return alive
            M = _partial_stack(disp[idx], jj)
            chunk = max(1, min(len(sets) - pos, 400_000 // (len(idx) * m * m)))
            block = sets[pos:pos + chunk]
            # (A, rows, width) -> (A, chunk, rows, m)
            sub = M[:, :, block].transpose(0, 2, 1, 3).reshape(-1, m, m)
            dets = batch_det(F, sub).reshape(len(idx), len(block))
            alive[idx] = (dets != 0).all(axis=1)
            pos += chunk
        if stats is not None:
            stats[f"alive_after_j{jj}"] = int(alive.sum())
    return alive


def evaluate_candidates(spec: SearchSpec, cand: np.ndarray, stats: dict | None = None) -> list[tuple[int, ...]]:
    cand = np.asarray(cand, dtype=np.int64).reshape(-1, spec.free_entries)
    if spec.threads > 1 and len(cand) > 1:
        parts = np.array_split(cand, spec.threads)
        with ThreadPoolExecutor(spec.threads) as pool:
            masks = list(pool.map(lambda c: _surviving(spec, c), parts))
        mask = np.concatenate(masks)
    else:
        mask = _surviving(spec, cand, stats)
    return sorted(tuple(int(x) for x in row) for row in cand[mask])


def _all_candidates(q: int, free: int) -> np.ndarray:
    vals = np.arange(1, q, dtype=np.int64)
    grids = np.meshgrid(*([vals] * free), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def exhaustive_search(spec: SearchSpec) -> SearchReport:
    """All tuples of nonzero free entries that give a complete j-MDP code."""
    q = spec.field.q
    space = (q - 1) ** spec.free_entries
    if space > MAX_EXHAUSTIVE:
        raise SearchTooLarge(f"{space} candidates exceed the limit {MAX_EXHAUSTIVE}")
    start = time.perf_counter()
    stats: dict = {}
    cand = _all_candidates(q, spec.free_entries)
    sols = evaluate_candidates(spec, cand, stats)
    p = spec.params
    return SearchReport(
        spec.field, p.n, p.k, p.delta, spec.j, len(cand), sols, space, "exhaustive", None,
        1000 * (time.perf_counter() - start), spec.normalize, stats,
    )


def randomized_search(spec: SearchSpec) -> SearchReport:
    """Uniform random nonzero tuples (deduplicated), plus any ``extra_candidates``."""
    q = spec.field.q
    start = time.perf_counter()
    rng = np.random.default_rng(spec.seed)
    drawn = rng.integers(1, q, size=(spec.trials, spec.free_entries), dtype=np.int64)
    extra = np.asarray(spec.extra_candidates, dtype=np.int64).reshape(-1, spec.free_entries)
    cand = np.concatenate([drawn, extra], axis=0)
    if len(cand):
        cand = np.unique(cand, axis=0)
    sols = evaluate_candidates(spec, cand)
    p = spec.params
    return SearchReport(
        spec.field, p.n, p.k, p.delta, spec.j, len(cand), sols, (q - 1) ** spec.free_entries,
        "random", spec.seed, 1000 * (time.perf_counter() - start), spec.normalize,
    )


def search(spec: SearchSpec) -> SearchReport:
    return exhaustive_search(spec) if spec.mode == "exhaustive" else randomized_search(spec)


def column_scalings(F: GF, sols: Sequence[Sequence[int]], n: int = 2) -> set[tuple[int, ...]]:
    """Full coefficient tuples (leading row included) obtained by scaling each column of normalized solutions."""
    out = set()
    for s in sols:
        flat = [1] * n + list(s)
        for scale in product(F.nonzero(), repeat=n):
            out.add(tuple(F.mul(x, scale[i % n]) for i, x in enumerate(flat)))
    return out


# closed-form families of (2,1,2) complete MDP codes ------------------------------


def family_f13(beta: int, gamma: int, i1: int, jj: int) -> ConvCode:
    """(2,1,2) complete MDP code over GF(13) from its exponent parameters."""
    F = make_field(13)
    if not (beta and gamma and 0 < beta < 13 and 0 < gamma < 13):
        raise ValueError("beta and gamma must be nonzero elements of GF(13)")
    if not 0 <= i1 <= 11 or jj not in (0, 1):
        raise ValueError("need i1 in 0..11 and jj in {0, 1}")
    i2 = (i1 + 6) % 12
    i3 = (2 * i1 + 1 + 6 * jj) % 12
    two = lambda e: F.pow(2, e)  # noqa: E731
    blocks = [
        [beta, gamma],
        [F.mul(beta, two(i1)), F.mul(gamma, two(i2))],
        [F.mul(beta, two(i3)), F.mul(gamma, two(i3))],
    ]
    return ConvCode.rate_half(F, blocks)


def family_f16(beta: int, gamma: int, i1: int, kk: int, jj: int, variant: str = "powers") -> ConvCode:
    """(2,1,2) complete MDP code over GF(16) = GF(2)[x]/(x^4+x+1).

    ``variant="powers"`` takes ``kk`` in {1,2,4,8} and ``jj`` in {0,1};
    ``variant="linear"`` is the alternative form with ``kk`` in 1..4 and ``jj``
    in {1,2}.
    """
    F = make_field(2, 4)
    if not (0 < beta < 16 and 0 < gamma < 16):
        raise ValueError("beta and gamma must be nonzero elements of GF(16)")
    if not 0 <= i1 <= 14:
        raise ValueError("need i1 in 0..14")
    if variant == "powers":
        if kk not in (1, 2, 4, 8) or jj not in (0, 1):
            raise ValueError("need kk in {1,2,4,8} and jj in {0,1}")
    elif variant == "linear":
        if kk not in (1, 2, 3, 4) or jj not in (1, 2):
            raise ValueError("need kk in 1..4 and jj in {1,2}")
    else:
        raise ValueError(f"unknown variant {variant!r}")
    i2 = (i1 + 3 * kk) % 15
    i3 = (i1 + i2 - 4**jj * kk) % 15
    a = F.alpha_pow
    blocks = [
        [beta, gamma],
        [F.mul(beta, a(i1)), F.mul(gamma, a(i2))],
        [F.mul(beta, a(i3)), F.mul(gamma, a(i3))],
    ]
    return ConvCode.rate_half(F, blocks)


def family_members(q: int, normalized: bool = True, variant: str = "powers") -> set[tuple[int, ...]]:
    """Coefficient tuples of the closed-form family (free entries when normalized, all six otherwise)."""
    scalars = [(1, 1)] if normalized else list(product(range(1, q), repeat=2))
    out = set()
    for beta, gamma in scalars:
        if q == 13:
            codes = (family_f13(beta, gamma, i1, jj) for i1 in range(12) for jj in (0, 1))
        elif q == 16:
            ks = (1, 2, 4, 8) if variant == "powers" else (1, 2, 3, 4)
            js = (0, 1) if variant == "powers" else (1, 2)
            codes = (family_f16(beta, gamma, i1, kk, jj, variant) for i1 in range(15) for kk in ks for jj in js)
        else:
            raise ValueError("families exist for q = 13 and q = 16 only")
        for c in codes:
            flat = c.flat()
            out.add(flat[2:] if normalized else flat)
    return out


@dataclass
class FamilyVerification:
    q: int
    ok: bool
    normalized_size: int
    search_count: int
    full_size: int
    expected_full_size: int
    all_members_complete: bool
    linear_variant_agrees: bool | None = None

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {
            "field": self.q,
            "holds": self.ok,
            "family_size": self.normalized_size,
            "search_count": self.search_count,
            "full_values": self.full_size,
            "expected_full_values": self.expected_full_size,
            "members_complete": self.all_members_complete,
            "linear_variant_agrees": self.linear_variant_agrees,
        }


def verify_family(q: int) -> FamilyVerification:
    """Check the closed form against an exhaustive j=L search over GF(q), q in {13, 16}."""
    F = make_field(13) if q == 13 else make_field(2, 4) if q == 16 else None
    if F is None:
        raise ValueError("families exist for q = 13 and q = 16 only")
    report = exhaustive_search(SearchSpec(F, 2, 1, 2, j=4))
    found = set(report.solutions)
    family = family_members(q)
    full = family_members(q, normalized=False)
    scaled = column_scalings(F, report.solutions)
    members_ok = all(
        is_complete_j_mdp(solution_code(F, 2, 1, 2, s), 4).holds for s in sorted(family)
    )
    expected_full = (q - 1) ** 2 * len(family)
    ok = family == found and full == scaled and len(full) == expected_full and members_ok
    linear = family_members(16, variant="linear") == found if q == 16 else None
    return FamilyVerification(q, ok, len(family), report.count, len(full), expected_full, members_ok, linear)


def percentage_3dp(report: SearchReport) -> float:
    """Percentage truncated to three decimals, as tabulated."""
    return math.floor(report.percentage * 1000) / 1000
