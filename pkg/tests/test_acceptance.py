"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line."""

from __future__ import annotations

import itertools
import math
import random
from functools import lru_cache

import pytest

from cjmdp.code import ConvCode, parse_code, resultant
from cjmdp.decoding import (
    ReceivedStream,
    decode_low_delay,
    decode_oracle,
    decode_windowed,
    gen_pattern,
    parse_pattern,
    random_codeword,
)
from cjmdp.gf import field
from cjmdp.minors import (
    ColumnSetKind,
    Kind,
    column_distance_oracle,
    has_nontrivial_term,
    index_condition,
    is_complete_j_mdp,
    support,
)
from cjmdp.search import SearchSpec, exhaustive_search, verify_family

from _helpers import edge_admissible, sliding_admissible
from conftest import F5_C0, F5_C1, F7_C2, F13_CMDP

FIELDS = {
    2: (2, 1), 3: (3, 1), 4: (2, 2), 5: (5, 1), 7: (7, 1), 8: (2, 3),
    9: (3, 2), 11: (11, 1), 13: (13, 1), 16: (2, 4),
}


@lru_cache(maxsize=None)
def solutions(q: int, j: int):
    return exhaustive_search(SearchSpec(field(*FIELDS[q]), 2, 1, 2, j))


def verdict(capsys, number: int, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, detail


# (q, j, count, tabulated percentage)
TABLE = [
    (5, 1, 20, 7.812),
    (8, 1, 714, 29.738),
    (7, 2, 14, 1.080),
    (8, 2, 126, 5.248),
    (13, 3, 240, 1.157),
    (16, 3, 600, 1.185),
    (13, 4, 24, 0.115),
    (16, 4, 120, 0.237),
]


def test_criterion_1_solution_counts(capsys):
    rows, ok = [], True
    for q, j, count, pct in TABLE:
        rep = solutions(q, j)
        good = rep.count == count and abs(rep.percentage - pct) <= 1e-3
        ok &= good
        rows.append(f"F{q} j={j}: {rep.count} ({rep.percentage:.3f}%) vs {count} ({pct}%){'' if good else ' MISMATCH'}")
    verdict(capsys, 1, ok, "; ".join(rows))


NONEXISTENCE = [(2, 1), (3, 1), (4, 1), (5, 2), (2, 3), (4, 3), (8, 3), (3, 3), (5, 3), (7, 3), (9, 3), (11, 3)]


def test_criterion_2_nonexistence(capsys):
    found = {(q, j): solutions(q, j).count for q, j in NONEXISTENCE}
    bad = {k: v for k, v in found.items() if v}
    verdict(capsys, 2, not bad, f"{len(found)} field/index pairs searched, nonzero counts: {bad or 'none'}")


def test_criterion_3_family_equivalence(capsys):
    r13, r16 = verify_family(13), verify_family(16)
    ok = (
        bool(r13) and bool(r16)
        and r13.normalized_size == 24 and r16.normalized_size == 120
        and r13.full_size == 12**2 * 24 and r16.full_size == 15**2 * 120
    )
    verdict(
        capsys, 3, ok,
        f"F13 holds={r13.ok} sizes {r13.normalized_size}/{r13.full_size}; "
        f"F16 holds={r16.ok} sizes {r16.normalized_size}/{r16.full_size}",
    )


F128_EXAMPLES = [
    (["1", "1"], ["α^6+α^3", "α^6+α^5+α^4+α^2+1"], ["α^5+α^4", "1"], ["α^4+α+1", "α^4+α^3+α^2+1"], "α^2+α+1"),
    (["1", "1"], ["α^4+α^3", "α^5"], ["α^6+α^5+α^2+α", "α^4+α^3+α^2"], ["α^6+α^4+α^2+α+1", "α^3+α^2+α+1"],
     "α^6+α^5+α^4+α^3+α"),
    (["1", "1"], ["α^5+α^3+α^2+1", "α^6+α^5+α^4+α+1"], ["α^5+α^4+α^3+α^2+α", "α^4+α^3+α+1"],
     ["α^6+α^4+α^3+α^2+1", "α^3+α"], "α^5+α^4"),
    (["1", "1"], ["α^6+α^5+α^4+α+1", "α^6+α^5+α^3+α^2+α"], ["α^6+α^5+α^4", "α^5+α^4+α^3+α^2+1"],
     ["α^3+α+1", "α^4+α^2+1"], "α^5+α^4+α^3+1"),
]


def test_criterion_4_rate_half_degree_three_examples(capsys):
    F = field(2, 7)
    kind = ColumnSetKind(Kind.COMPLETE, 2, 1, 3, 4)
    universe = sum(1 for _ in itertools.combinations(range(kind.width), kind.rows))
    details, ok = [f"universe {universe}"], universe == math.comb(16, 5) == 4368
    for *blocks, res in F128_EXAMPLES:
        code = ConvCode.rate_half(F, [[F.from_alpha(x) for x in b] for b in blocks])
        holds = is_complete_j_mdp(code, 4).holds
        got = F.to_alpha(resultant(code))
        ok &= holds and got == res
        details.append(f"holds={holds} res={got}")
    verdict(capsys, 4, ok, "; ".join(details))


def _stream(code, pattern, seed):
    pat = parse_pattern(pattern)
    word = random_codeword(code, pat.steps, random.Random(seed))
    return word, ReceivedStream.from_codeword(code, word, pat)


def test_criterion_5_decoding_scenarios(capsys):
    code_a = parse_code(F5_C0)
    word, stream = _stream(code_a, "x.|.x|x.|xx|x.|..|..|x.|.x", 1)
    rep = decode_windowed(code_a, stream)
    a = sorted(rep.lost) == [6, 7] and all(rep.residual[s] == word[s] for s in rep.recovered)

    # the stated code is only complete 0-MDP, so the two-step window is supplied explicitly
    code_b = parse_code("5:1 1|1 2|1 2")
    word, stream = _stream(code_b, "xx|x.|.x|x.|x.|x.|..|..|x.|.x|x.|x.|xx", 2)
    rep = decode_windowed(code_b, stream, j=1)
    b = rep.complete and rep.residual == word

    f13, f7 = parse_code(F13_CMDP), parse_code(F7_C2)
    word, stream = _stream(f13, "xx|x.|xx|..|..", 3)
    r4 = decode_low_delay(f13, stream, 4)
    _, s7 = _stream(f7, "xx|x.|xx|..|..", 3)
    r7 = decode_low_delay(f7, s7, 2)
    c = r4.complete and len(r4.recovered) == 5 and r4.residual == word and {0, 1} <= r7.lost
    verdict(capsys, 5, a and b and c, f"(a) {a} (b) {b} (c) {c}")


def test_criterion_6_column_distances(capsys):
    f13 = parse_code(F13_CMDP)
    base = [column_distance_oracle(f13, j) for j in range(5)]
    ok = base == [j + 2 for j in range(5)]
    details = [f"F13 code {base}"]
    rng = random.Random(6)
    for q, j, _, _ in TABLE:
        rep = solutions(q, j)
        sample = rng.sample(rep.solutions, min(20, rep.count))
        bad = 0
        for s in sample:
            code = ConvCode.from_display(rep.field, 2, 1, 2, [[1, 1], list(s[:2]), list(s[2:])])
            if any(column_distance_oracle(code, i) != i + 2 for i in range(j + 1)):
                bad += 1
        ok &= bad == 0 and len(sample) >= min(20, rep.count)
        details.append(f"F{q} j={j}: {len(sample)} sampled, {bad} off")
    verdict(capsys, 6, ok, "; ".join(details))


SUITE_CODES = [(F5_C1, 1), (F7_C2, 2), (F13_CMDP, 4)]
PATTERNS_PER_CODE = 10_000


def _index_matches_matching(nu: int) -> bool:
    kind = ColumnSetKind(Kind.COMPLETE, 2, 1, nu, 4)
    mask = support(kind)
    return all(
        index_condition(kind, [c + 1 for c in cols]) == has_nontrivial_term(mask[:, list(cols)])
        for cols in itertools.combinations(range(kind.width), kind.rows)
    )


def _sliding_suite(text: str, j: int, rng: random.Random) -> int:
    code = parse_code(text)
    failures = 0
    for _ in range(PATTERNS_PER_CODE):
        steps = rng.randint(j + 2, 12)
        pat = sliding_admissible(rng, steps, 2, 1, j, rng.uniform(0.2, 1.0))
        word = random_codeword(code, steps, rng)
        rep = decode_windowed(code, ReceivedStream.from_codeword(code, word, pat), j)
        failures += not rep.complete or rep.residual != word
    return failures


def _guard_suite(text: str, j: int, rng: random.Random) -> int:
    code = parse_code(text)
    nu = code.nu
    width = nu + j + 1
    failures = 0
    for _ in range(PATTERNS_PER_CODE):
        before, after = rng.randint(0, 3), rng.randint(0, 3)
        steps = before + width + after
        flags = [True] * (before * 2) + edge_admissible(rng, nu, j, 2, 1) + [True] * (after * 2)
        word = random_codeword(code, steps, rng)
        stream = ReceivedStream(code, [None if e else v for v, e in zip(word, flags)])
        rep = decode_windowed(code, stream, j)
        inside = range(before * 2, (before + width) * 2)
        failures += any(stream.values[s] is None and rep.residual[s] != word[s] for s in inside)
    return failures


def _round_trips(rng: random.Random, streams: int) -> int:
    failures = 0
    codes = [parse_code(t) for t in (F5_C0, F5_C1, F7_C2, F13_CMDP)]
    for i in range(streams):
        code = codes[i % len(codes)]
        steps = rng.randint(3, 12)
        terminated = rng.random() < 0.7
        word = random_codeword(code, steps, rng, terminated)
        pat = gen_pattern(f"iid:{rng.uniform(0.05, 0.6):.3f}", steps * 2, rng.randrange(2**32))
        stream = ReceivedStream.from_codeword(code, word, pat, terminated)
        for rep in (
            decode_windowed(code, stream),
            decode_oracle(code, stream),
            decode_low_delay(code, stream, rng.randint(0, 4), partial=rng.random() < 0.3),
        ):
            failures += any(rep.residual[s] != word[s] for s in rep.recovered)
    return failures


def test_criterion_7_property_suites(capsys):
    rng = random.Random(7)
    details, ok = [], True

    in2 = _index_matches_matching(2) and _index_matches_matching(3)
    ok &= in2
    details.append(f"index test vs matching on C(14,5)+C(16,5): {in2}")

    nested = True
    for q, top in ((5, 1), (7, 2), (8, 2), (13, 4), (16, 4)):
        sets = [set(solutions(q, j).solutions) for j in range(top + 1)]
        nested &= all(sets[j + 1] <= sets[j] for j in range(top))
    ok &= nested
    details.append(f"nesting: {nested}")

    for text, j in SUITE_CODES:
        f1 = _sliding_suite(text, j, rng)
        f2 = _guard_suite(text, j, rng)
        ok &= f1 == 0 and f2 == 0
        details.append(f"{text} j={j}: sliding {f1}/{PATTERNS_PER_CODE} fail, guard {f2}/{PATTERNS_PER_CODE} fail")

    rt = _round_trips(rng, 1200)
    ok &= rt == 0
    details.append(f"round trips 1200 streams, {rt} wrong values")
    verdict(capsys, 7, ok, "; ".join(details))
