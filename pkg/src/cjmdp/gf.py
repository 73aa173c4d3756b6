"""Finite field arithmetic GF(p^r) for q <= 2**16.

Elements are plain integers in ``[0, q)``.  The base-p digits of an integer
(least significant first) are the coefficients of ``1, a, a^2, ...`` where
``a`` is the residue class of the modulus variable.  All multiplicative
operations go through log/antilog tables built once per field.
"""

from __future__ import annotations

import re
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

MAX_ORDER = 1 << 16

# Default moduli (little-endian coefficient lists) for the binary fields that
# appear with explicit alpha-expressions.
_DEFAULT_MODULI = {
    (2, 3): (1, 1, 0, 1),  # x^3 + x + 1
    (2, 4): (1, 1, 0, 0, 1),  # x^4 + x + 1
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),  # x^7 + x + 1
}


class FieldError(ValueError):
    """Invalid field parameters or field-incompatible operands."""


class FieldMismatchError(FieldError):
    """Operands belong to different fields."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def _prime_factors(m: int) -> list[int]:
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


# -- polynomials over GF(p), little-endian tuples, used only while building a field

def _ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _ptrim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        f = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - f * c) % p
        _ptrim(a)
    return a


def _monic_polys(p: int, degree: int) -> Iterable[tuple[int, ...]]:
    for code in range(p**degree):
        coeffs = []
        for _ in range(degree):
            coeffs.append(code % p)
            code //= p
        yield tuple(coeffs) + (1,)


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    r = len(modulus) - 1
    if r < 1:
        return False
    for d in range(1, r // 2 + 1):
        for f in _monic_polys(p, d):
            if not _pmod(modulus, f, p):
                return False
    return True


def pack(coeffs: Sequence[int], p: int) -> int:
    """Pack little-endian base-p digits into an integer."""
    v = 0
    for c in reversed(coeffs):
        v = v * p + c
    return v


def unpack(value: int, p: int, length: int) -> list[int]:
    out = []
    for _ in range(length):
        out.append(value % p)
        value //= p
    return out


class GF:
    """The finite field GF(p^r).

    Parameters
    ----------
    p : int
        Prime characteristic.
    r : int
        Extension degree, ``p**r <= 2**16``.
    modulus : sequence of int, optional
        Monic degree-``r`` polynomial over GF(p), little-endian.  Defaults to
        x^3+x+1, x^4+x+1 and x^7+x+1 for GF(8), GF(16), GF(128) and to the
        smallest (by packed integer) monic irreducible polynomial otherwise.

    Instances are immutable and compare equal when ``p``, ``r`` and the
    modulus agree.
    """

    def __init__(self, p: int, r: int = 1, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if r < 1:
            raise FieldError(f"extension degree must be >= 1, got {r}")
        if p**r > MAX_ORDER:
            raise FieldError(f"field order {p}^{r} exceeds {MAX_ORDER}")
        if modulus is None:
            modulus = _default_modulus(p, r)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != r + 1 or modulus[-1] != 1:
            raise FieldError(f"modulus must be monic of degree {r}")
        if not is_irreducible(modulus, p):
            raise FieldError(f"modulus {modulus} is reducible over GF({p})")
        self.p = p
        self.r = r
        self.q = p**r
        self.modulus = modulus
        self._build_tables()

    # construction -----------------------------------------------------

    def _mul_slow(self, a: int, b: int) -> int:
        p, r = self.p, self.r
        if r == 1:
            return a * b % p
        x = unpack(a, p, r)
        y = unpack(b, p, r)
        prod = [0] * (2 * r - 1)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    prod[i + j] = (prod[i + j] + xi * yj) % p
        red = _pmod(prod, self.modulus, p)
        return pack(red, p)

    def _pow_slow(self, a: int, e: int) -> int:
        out = 1
        while e:
            if e & 1:
                out = self._mul_slow(out, a)
            a = self._mul_slow(a, a)
            e >>= 1
        return out

    def _build_tables(self) -> None:
        q = self.q
        order = q - 1
        targets = [order // f for f in _prime_factors(order)] if order > 1 else []
        prim = next(g for g in range(1, q) if all(self._pow_slow(g, d) != 1 for d in targets))
        self.primitive = prim
        powers = [1]
        x = 1
        for _ in range(order - 1):
            x = self._mul_slow(x, prim)
            powers.append(x)
        exp = powers + powers  # length 2(q-1): exp[i + j] needs no reduction
        log = [0] * q
        for i, x in enumerate(powers):
            log[x] = i
        self._exp = exp
        self._log = log
        self._order = order
        self.exp_table = np.array(exp + exp[:2], dtype=np.int64)
        self.log_table = np.array(log, dtype=np.int64)
        if self.r > 1 and self.p != 2:
            digits = np.array([unpack(v, self.p, self.r) for v in range(q)], dtype=np.int64)
            self._digits = digits
            self._weights = self.p ** np.arange(self.r, dtype=np.int64)
            negs = [pack([(-d) % self.p for d in unpack(v, self.p, self.r)], self.p) for v in range(q)]
            self._neg = negs
            self._neg_table = np.array(negs, dtype=np.int64)

    # identity / text --------------------------------------------------

    @property
    def modulus_int(self) -> int:
        return pack(self.modulus, self.p)

    def __repr__(self) -> str:
        return f"GF({self.spec()})"

    def spec(self) -> str:
        """Text form ``p^r/modulus``; prime fields render as ``p``."""
        if self.r == 1:
            return str(self.p)
        return f"{self.p}^{self.r}/{self.modulus_int}"

    __str__ = spec

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GF) and (self.p, self.r, self.modulus) == (other.p, other.r, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.r, self.modulus))

    def __call__(self, value: int) -> Element:
        return Element(self, value)

    def __len__(self) -> int:
        return self.q

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    def check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise FieldError(f"{a} is not an element of {self!r}")
        return a

    # scalar arithmetic on ints ------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.r == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        p = self.p
        out, w = 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * w
            a //= p
            b //= p
            w *= p
        return out

    def neg(self, a: int) -> int:
        if self.r == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._exp[(self._order - self._log[a]) % self._order]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by zero")
        if a == 0:
            return 0
        return self._exp[(self._log[a] - self._log[b]) % self._order]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e > 0:
                return 0
            if e == 0:
                return 1
            raise ZeroDivisionError("negative power of zero")
        return self._exp[(self._log[a] * e) % self._order]

    def log(self, a: int) -> int:
        """Discrete log to the base of :attr:`primitive`."""
        if a == 0:
            raise ValueError("log of zero")
        return self._log[a]

    def alpha_pow(self, e: int) -> int:
        """``primitive ** e``."""
        return self._exp[e % self._order]

    def sum(self, values: Iterable[int]) -> int:
        acc = 0
        for v in values:
            acc = self.add(acc, v)
        return acc

    def dot(self, xs: Sequence[int], ys: Sequence[int]) -> int:
        acc = 0
        for x, y in zip(xs, ys):
            if x and y:
                acc = self.add(acc, self._exp[self._log[x] + self._log[y]])
        return acc

    # vectorised arithmetic on integer arrays ----------------------------

    def vadd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.r == 1:
            return (a + b) % self.p
        if self.p == 2:
            return np.bitwise_xor(a, b)
        da = self._digits[a]
        db = self._digits[b]
        return ((da + db) % self.p) @ self._weights

    def vneg(self, a: np.ndarray) -> np.ndarray:
        if self.r == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        return self._neg_table[a]

    def vsub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.vadd(a, self.vneg(b))

    def vmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a)
        b = np.asarray(b)
        prod = self.exp_table[self.log_table[a] + self.log_table[b]]
        return np.where((a == 0) | (b == 0), 0, prod)

    def vinv(self, a: np.ndarray) -> np.ndarray:
        """Elementwise inverse; zero maps to zero."""
        a = np.asarray(a)
        out = self.exp_table[(self._order - self.log_table[a]) % self._order]
        return np.where(a == 0, 0, out)

    # rendering ----------------------------------------------------------

    def to_alpha(self, a: int, symbol: str = "α") -> str:
        """Render ``a`` as a polynomial in the modulus root, e.g. ``α^2+α+1``."""
        self.check(a)
        if self.r == 1:
            return str(a)
        digits = unpack(a, self.p, self.r)
        terms = []
        for i in range(self.r - 1, -1, -1):
            d = digits[i]
            if not d:
                continue
            coef = "" if (d == 1 and i > 0) else str(d)
            if i == 0:
                terms.append(str(d))
            elif i == 1:
                terms.append(f"{coef}{symbol}")
            else:
                terms.append(f"{coef}{symbol}^{i}")
        return "+".join(terms) if terms else "0"

    def from_alpha(self, text: str) -> int:
        """Parse a sum of terms like ``a^6+a^3+1`` (symbols ``a``/``α``)."""
        text = text.replace(" ", "").replace("α", "a")
        if text in ("", "0"):
            return 0
        acc = 0
        for term in text.split("+"):
            m = re.fullmatch(r"(\d*)(a(?:\^(\d+))?)?", term)
            if not m or not term:
                raise FieldError(f"bad alpha term {term!r}")
            coef = int(m.group(1)) if m.group(1) else 1
            if m.group(2):
                e = int(m.group(3)) if m.group(3) else 1
                power = pack([0] * e + [1], self.p) if e < self.r else self._root_pow(e)
            else:
                power = 1
            acc = self.add(acc, self.mul(coef % self.p, power) if coef % self.p else 0)
        return acc

    def _root_pow(self, e: int) -> int:
        root = pack([0, 1], self.p)
        x = 1
        for _ in range(e):
            x = self.mul(x, root)
        return x


def _default_modulus(p: int, r: int) -> tuple[int, ...]:
    if r == 1:
        return (0, 1)
    if (p, r) in _DEFAULT_MODULI:
        return _DEFAULT_MODULI[(p, r)]
    for m in _monic_polys(p, r):
        if is_irreducible(m, p):
            return m
    raise FieldError(f"no irreducible polynomial of degree {r} over GF({p})")  # pragma: no cover


@lru_cache(maxsize=None)
def field(p: int, r: int = 1, modulus: tuple[int, ...] | None = None) -> GF:
    """Cached field constructor; table building for GF(2^16) is not free."""
    return GF(p, r, modulus)


def prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            r = 0
            m = q
            while m % p == 0:
                m //= p
                r += 1
            if m != 1 or not is_prime(p):
                break
            return p, r
    raise FieldError(f"{q} is not a prime power")


def parse_field(text: str) -> GF:
    """Parse ``q``, ``p^r`` or ``p^r/modulus`` (modulus packed base p)."""
    text = str(text).strip()
    m = re.fullmatch(r"(\d+)(?:\^(\d+))?(?:/(\d+))?", text)
    if not m:
        raise FieldError(f"cannot parse field {text!r}")
    base = int(m.group(1))
    if m.group(2) is None:
        p, r = prime_power(base)
    else:
        p, r = base, int(m.group(2))
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
    modulus = None
    if m.group(3) is not None:
        modulus = tuple(unpack(int(m.group(3)), p, r + 1))
        if r == 1 and modulus == (0, 1):
            modulus = None
    return field(p, r, modulus)


class Element:
    """A field element carrying its field; arithmetic refuses mixed fields."""

    __slots__ = ("field", "value")

    def __init__(self, field: GF, value: int):
        self.field = field
        self.value = field.check(int(value))

    def _other(self, other: Element | int) -> int:
        if isinstance(other, Element):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field!r} vs {other.field!r}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return self.field.check(int(other))
        return NotImplemented

    def __add__(self, other):
        return Element(self.field, self.field.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Element(self.field, self.field.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return Element(self.field, self.field.sub(self._other(other), self.value))

    def __mul__(self, other):
        return Element(self.field, self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Element(self.field, self.field.div(self.value, self._other(other)))

    def __rtruediv__(self, other):
        return Element(self.field, self.field.div(self._other(other), self.value))

    def __neg__(self):
        return Element(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return Element(self.field, self.field.pow(self.value, e))

    def inverse(self) -> Element:
        return Element(self.field, self.field.inv(self.value))

    def __int__(self) -> int:
        return self.value

    __index__ = __int__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Element):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field, self.value))

    def __repr__(self) -> str:
        return f"{self.value} in {self.field!r}"
