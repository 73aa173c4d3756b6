from __future__ import annotations

import itertools
import math
import random

import numpy as np
import pytest

from cjmdp.code import ConvCode, parse_code, partial_matrix, sliding_matrix
from cjmdp.gf import field
from cjmdp.linalg import det
from cjmdp.minors import (
    ColumnSetKind,
    Kind,
    OracleTooLarge,
    column_array,
    column_distance_oracle,
    complete_index,
    has_nontrivial_term,
    index_condition,
    is_complete_j_mdp,
    is_jth_distance_maximal,
    is_mdp,
    is_reverse_mdp,
    matching_size,
    nontrivial_column_sets,
    support,
)

SHAPES = [(2, 1, 2, j) for j in range(5)] + [(2, 1, 3, j) for j in range(5)] + [(3, 1, 2, j) for j in range(3)]


@pytest.mark.parametrize("kind", list(Kind))
@pytest.mark.parametrize("n,k,nu,j", SHAPES)
def test_index_condition_equals_matching(kind, n, k, nu, j):
    csk = ColumnSetKind(kind, n, k, nu, j)
    mask = support(csk)
    for cols in itertools.combinations(range(csk.width), csk.rows):
        structural = has_nontrivial_term(mask[:, list(cols)])
        assert index_condition(csk, [c + 1 for c in cols]) == structural, cols


def test_universe_sizes():
    full = ColumnSetKind(Kind.COMPLETE, 2, 1, 2, 4)
    assert math.comb(full.width, full.rows) == 2002
    assert len(list(nontrivial_column_sets(full))) == len(column_array(full)) == 1288
    k213 = ColumnSetKind(Kind.COMPLETE, 2, 1, 3, 4)
    assert math.comb(k213.width, k213.rows) == 4368
    assert len(column_array(k213)) == 3264
    fwd0 = ColumnSetKind(Kind.FORWARD, 2, 1, 2, 0)
    assert list(nontrivial_column_sets(fwd0)) == [(1,), (2,)]


def test_matching_basics():
    assert has_nontrivial_term(np.eye(4, dtype=bool))
    m = np.ones((3, 3), dtype=bool)
    m[1] = False
    assert not has_nontrivial_term(m)
    assert matching_size(m) == 2
    with pytest.raises(ValueError):
        has_nontrivial_term(np.ones((2, 3), dtype=bool))


def test_f13_complete_mdp(f13_code):
    for j in range(5):
        rep = is_complete_j_mdp(f13_code, j)
        assert rep.holds and rep.counterexample is None
    assert is_complete_j_mdp(f13_code, 4).minors_checked == 1288
    assert is_jth_distance_maximal(f13_code, 4).holds
    assert is_mdp(f13_code).holds
    assert is_reverse_mdp(f13_code).holds
    assert complete_index(f13_code) == 4
    with pytest.raises(ValueError):
        is_complete_j_mdp(f13_code, 5)


def test_published_examples():
    F8, F16 = field(2, 3), field(2, 4)
    a8 = F8.primitive
    assert is_complete_j_mdp(parse_code("7:1 1|1 2|5 5"), 2).holds
    assert is_complete_j_mdp(ConvCode.rate_half(F8, [[1, 1], [1, a8], [a8 ^ 1, a8 ^ 1]]), 2).holds
    A = F16.from_alpha
    assert is_complete_j_mdp(ConvCode.rate_half(F16, [[1, 1], [1, A("α^3")], [A("α^2"), A("α^2")]]), 4).holds


def test_f7_mdp_verdict_matches_oracle(f7_code):
    assert complete_index(f7_code) == 2
    distances = [column_distance_oracle(f7_code, j) for j in range(5)]
    assert is_mdp(f7_code).holds == (distances[4] == 6)
    for j, d in enumerate(distances):
        assert is_jth_distance_maximal(f7_code, j).holds == (d == j + 2)


def test_f5_example_is_not_one_mdp():
    code = parse_code("5:1 1|1 2|1 2")
    rep = is_jth_distance_maximal(code, 1)
    assert not rep.holds and rep.counterexample == (1, 2)
    assert column_distance_oracle(code, 1) == 2
    assert complete_index(code) == 0


def test_counterexample_minor_is_zero():
    rng = random.Random(11)
    F = field(7)
    for _ in range(40):
        H = [[[rng.randrange(1, 7) for _ in range(2)]] for _ in range(3)]
        code = ConvCode(F, 2, 1, 2, H)
        for j in range(5):
            rep = is_complete_j_mdp(code, j)
            if rep.counterexample:
                M = partial_matrix(code, j).columns([c - 1 for c in rep.counterexample])
                assert M.det() == 0
                # lexicographically first zero minor
                for cols in nontrivial_column_sets(ColumnSetKind.of(Kind.COMPLETE, code, j)):
                    if cols == rep.counterexample:
                        break
                    assert det(F, partial_matrix(code, j).columns([c - 1 for c in cols]).rows) != 0


def test_zero_entry_fails():
    code = ConvCode.rate_half(field(5), [[1, 1], [1, 2], [0, 3]])
    assert not is_jth_distance_maximal(code, 0).holds
    assert not is_mdp(ConvCode.rate_half(field(2), [[1, 1], [0, 1], [1, 1]])).holds


def test_not_left_prime_report():
    code = ConvCode.rate_half(field(2), [[1, 1], [1, 1], [1, 1]])
    rep = is_complete_j_mdp(code, 0)
    assert not rep.holds
    assert rep.counterexample is None and "left prime" in rep.reason
    d = rep.to_dict()
    assert d["counterexample_columns"] is None and d["holds"] is False


def test_column_distances_f13(f13_code):
    assert [column_distance_oracle(f13_code, j) for j in range(5)] == [2, 3, 4, 5, 6]


def test_column_distance_bounds_random():
    rng = random.Random(2)
    F = field(5)
    for _ in range(25):
        H = [[[rng.randrange(5) for _ in range(2)]] for _ in range(3)]
        if not any(H[0][0]):
            continue
        code = ConvCode(F, 2, 1, 2, H)
        prev = 0
        for j in range(4):
            d = column_distance_oracle(code, j)
            assert 1 <= d <= j + 2
            assert d >= prev
            prev = d
            if is_jth_distance_maximal(code, j).holds:
                assert d == j + 2


def test_oracle_guard():
    code = ConvCode.rate_half(field(2, 8), [[1, 1], [2, 3], [4, 5]])
    with pytest.raises(OracleTooLarge):
        column_distance_oracle(code, 4)


@pytest.mark.parametrize("q", [5, 7, 8, 13, 16])
def test_nesting_sampled(q):
    F = field(13) if q == 13 else field(2, 3) if q == 8 else field(2, 4) if q == 16 else field(q)
    rng = random.Random(q)
    for _ in range(25):
        H = [[[rng.randrange(1, F.q) for _ in range(2)]] for _ in range(3)]
        code = ConvCode(F, 2, 1, 2, H)
        verdicts = [is_complete_j_mdp(code, j).holds for j in range(5)]
        for i in range(5):
            if verdicts[i]:
                assert all(verdicts[:i + 1])


def test_complete_mdp_implies_reverse_mdp():
    from cjmdp.search import family_f16

    for args in ((1, 1, 0, 1, 0), (3, 7, 5, 4, 1), (2, 9, 14, 8, 0)):
        code = family_f16(*args)
        assert is_complete_j_mdp(code, code.L).holds
        assert is_reverse_mdp(code).holds


def test_sliding_minor_set_matches_definition(f13_code):
    kind = ColumnSetKind.of(Kind.FORWARD, f13_code, 2)
    expected = [
        cols
        for cols in itertools.combinations(range(1, 7), 3)
        if cols[0] <= 2 and cols[1] <= 4
    ]
    assert list(nontrivial_column_sets(kind)) == expected
    assert sliding_matrix(f13_code, 2).shape == (3, 6)
