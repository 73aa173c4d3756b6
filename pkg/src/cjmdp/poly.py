"""Univariate polynomials over GF(q) as little-endian int lists."""

from __future__ import annotations

from typing import Sequence

from .gf import GF

Poly = list[int]


def trim(a: Sequence[int]) -> Poly:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def degree(a: Sequence[int]) -> int:
    """Degree, with -1 for the zero polynomial."""
    return len(trim(a)) - 1


def add(F: GF, a: Sequence[int], b: Sequence[int]) -> Poly:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return trim(F.add(x, y) for x, y in zip(a, b))


def sub(F: GF, a: Sequence[int], b: Sequence[int]) -> Poly:
    return add(F, a, [F.neg(y) for y in b])


def mul(F: GF, a: Sequence[int], b: Sequence[int]) -> Poly:
    a, b = trim(a), trim(b)
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return trim(out)


def divmod_(F: GF, a: Sequence[int], b: Sequence[int]) -> tuple[Poly, Poly]:
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = trim(a)
    db = len(b) - 1
    inv_lead = F.inv(b[-1])
    qt = [0] * max(len(r) - db, 0)
    while len(r) - 1 >= db:
        shift = len(r) - 1 - db
        f = F.mul(r[-1], inv_lead)
        qt[shift] = f
        for i, c in enumerate(b):
            r[shift + i] = F.sub(r[shift + i], F.mul(f, c))
        r = trim(r)
    return trim(qt), r


def gcd(F: GF, a: Sequence[int], b: Sequence[int]) -> Poly:
    """Monic gcd (zero if both inputs are zero)."""
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_(F, a, b)[1]
    if not a:
        return []
    inv = F.inv(a[-1])
    return [F.mul(c, inv) for c in a]


def evaluate(F: GF, a: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def det(F: GF, M: Sequence[Sequence[Sequence[int]]]) -> Poly:
    """Determinant of a small square polynomial matrix by cofactor expansion."""
    n = len(M)
    if n == 0:
        return [1]
    if n == 1:
        return trim(M[0][0])
    total: Poly = []
    for j in range(n):
        if not trim(M[0][j]):
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = mul(F, M[0][j], det(F, minor))
        total = sub(F, total, term) if j % 2 else add(F, total, term)
    return total
