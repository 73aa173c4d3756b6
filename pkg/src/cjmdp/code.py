"""Convolutional codes given by parity-check coefficients, and their matrices.

A code ``H(z) = H_0 + H_1 z + ... + H_nu z^nu`` is stored with ``H[i]`` the
``(n-k) x n`` coefficient of ``z^i``.  Text and JSON forms list the
coefficients highest index first, ``[H_nu ... H_0]``, which is the usual
display order (``"1 1|1 12|2 2"`` means ``H_2=[1 1], H_1=[1 12], H_0=[2 2]``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Sequence

from . import poly
from .gf import GF, parse_field
from .linalg import GFMatrix

Block = list[list[int]]


class CodeError(ValueError):
    """Inconsistent code parameters or coefficient shapes."""


@dataclass(frozen=True)
class CodeParams:
    n: int
    k: int
    delta: int

    def __post_init__(self):
        if not 0 < self.k < self.n:
            raise CodeError(f"need 0 < k < n, got n={self.n}, k={self.k}")
        if self.delta < 0:
            raise CodeError("degree must be non-negative")
        if self.delta % (self.n - self.k):
            raise CodeError(f"(n-k)={self.n - self.k} does not divide delta={self.delta}")

    @property
    def nu(self) -> int:
        return self.delta // (self.n - self.k)

    @property
    def L(self) -> int:
        return self.delta // self.k + self.delta // (self.n - self.k)

    @property
    def r(self) -> int:
        """Number of parity rows, n - k."""
        return self.n - self.k


class ConvCode:
    """An (n, k, delta) convolutional code over ``field``.

    ``H`` lists the coefficient matrices in ascending order ``H_0 .. H_nu``.
    Construction checks shapes only; left-primeness is a separate question
    (:func:`is_left_prime`).
    """

    def __init__(self, field: GF, n: int, k: int, delta: int, H: Sequence[Sequence[Sequence[int]]]):
        self.field = field
        self.params = CodeParams(n, k, delta)
        nu = self.params.nu
        if len(H) != nu + 1:
            raise CodeError(f"expected {nu + 1} coefficient matrices, got {len(H)}")
        blocks = []
        for i, Hi in enumerate(H):
            Hi = [[field.check(int(x)) for x in row] for row in Hi]
            if len(Hi) != n - k or any(len(row) != n for row in Hi):
                raise CodeError(f"H_{i} must be {n - k}x{n}")
            blocks.append(Hi)
        self.H: list[Block] = blocks

    @classmethod
    def from_display(cls, field: GF, n: int, k: int, delta: int, blocks: Sequence[Sequence[int]]) -> ConvCode:
        """Build from row-major blocks listed highest index first."""
        r = n - k
        H = []
        for flat in reversed(blocks):
            if len(flat) != r * n:
                raise CodeError(f"each block needs {r * n} entries, got {len(flat)}")
            H.append([list(flat[i * n:(i + 1) * n]) for i in range(r)])
        return cls(field, n, k, delta, H)

    @classmethod
    def rate_half(cls, field: GF, blocks: Sequence[Sequence[int]]) -> ConvCode:
        """(2,1,nu) code from ``[[h_nu pair], ..., [h_0 pair]]``."""
        nu = len(blocks) - 1
        return cls.from_display(field, 2, 1, nu, blocks)

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def k(self) -> int:
        return self.params.k

    @property
    def delta(self) -> int:
        return self.params.delta

    @property
    def nu(self) -> int:
        return self.params.nu

    @property
    def L(self) -> int:
        return self.params.L

    def coeff(self, i: int) -> Block | None:
        """``H_i`` or ``None`` when ``i`` is outside ``0..nu``."""
        if 0 <= i <= self.nu:
            return self.H[i]
        return None

    def display_blocks(self) -> list[list[int]]:
        return [[x for row in Hi for x in row] for Hi in reversed(self.H)]

    def flat(self) -> tuple[int, ...]:
        """All coefficients, highest index first, row-major."""
        return tuple(x for b in self.display_blocks() for x in b)

    def poly_entry(self, row: int, col: int) -> list[int]:
        return poly.trim(Hi[row][col] for Hi in self.H)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ConvCode)
            and self.field == other.field
            and self.params == other.params
            and self.H == other.H
        )

    def __hash__(self) -> int:
        return hash((self.field, self.params, self.flat()))

    def __repr__(self) -> str:
        body = "|".join(" ".join(map(str, b)) for b in self.display_blocks())
        return f"ConvCode({self.field}, ({self.n},{self.k},{self.delta}), [{body}])"

    # serialisation ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "field": self.field.spec(),
            "n": self.n,
            "k": self.k,
            "delta": self.delta,
            "H": self.display_blocks(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> ConvCode:
        try:
            F = data["field"]
            F = F if isinstance(F, GF) else parse_field(str(F))
            return cls.from_display(F, int(data["n"]), int(data["k"]), int(data["delta"]), data["H"])
        except KeyError as exc:
            raise CodeError(f"code description lacks {exc}") from None

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def code_new(field: GF, n: int, k: int, delta: int, coeffs: Sequence[Sequence[Sequence[int]]]) -> ConvCode:
    """Shape-checked constructor; ``coeffs`` is ``[H_0, ..., H_nu]``."""
    return ConvCode(field, n, k, delta, coeffs)


def parse_code(text: str) -> ConvCode:
    """Read a code from a JSON file path, inline JSON, or compact text.

    The compact form ``"<field>:<H_nu>|...|<H_0>"`` assumes one parity row,
    e.g. ``"13:1 1|1 12|2 2"``.
    """
    text = text.strip()
    if text.startswith("{"):
        return ConvCode.from_dict(json.loads(text))
    path = Path(text)
    if path.suffix == ".json" or path.is_file():
        return ConvCode.from_dict(json.loads(path.read_text()))
    if ":" not in text:
        raise CodeError(f"cannot parse code {text!r}")
    fspec, body = text.split(":", 1)
    F = parse_field(fspec)
    blocks = [[int(x) for x in part.replace(",", " ").split()] for part in body.split("|")]
    n = len(blocks[0])
    if any(len(b) != n for b in blocks):
        raise CodeError("compact form needs equally sized blocks")
    return ConvCode.from_display(F, n, n - 1, len(blocks) - 1, blocks)


# structured matrices ----------------------------------------------------


def _place(M: list[list[int]], block: Block, r0: int, c0: int) -> None:
    for i, row in enumerate(block):
        M[r0 + i][c0:c0 + len(row)] = row


def sliding_matrix(code: ConvCode, j: int) -> GFMatrix:
    """Lower block-Toeplitz ``(j+1)(n-k) x (j+1)n`` with ``H_{r-c}`` at block ``(r, c)``."""
    r, n = code.params.r, code.n
    M = GFMatrix.zeros(code.field, (j + 1) * r, (j + 1) * n)
    for br in range(j + 1):
        for bc in range(br + 1):
            blk = code.coeff(br - bc)
            if blk is not None:
                _place(M.rows, blk, br * r, bc * n)
    return M


def partial_matrix(code: ConvCode, j: int) -> GFMatrix:
    """Partial parity-check matrix, ``(j+1)(n-k) x (nu+j+1)n``.

    Block row ``r`` holds ``H_nu ... H_0`` starting at block column ``r``.
    """
    r, n, nu = code.params.r, code.n, code.nu
    M = GFMatrix.zeros(code.field, (j + 1) * r, (nu + j + 1) * n)
    for br in range(j + 1):
        for m in range(nu + 1):
            _place(M.rows, code.H[nu - m], br * r, (br + m) * n)
    return M


def reverse_sliding_matrix(code: ConvCode, j: int | None = None) -> GFMatrix:
    """Upper block-Toeplitz matrix with ``H_nu`` on the diagonal, ``H_{nu-s}`` on superdiagonal s.

    Defaults to ``j = L``.
    """
    j = code.L if j is None else j
    r, n, nu = code.params.r, code.n, code.nu
    M = GFMatrix.zeros(code.field, (j + 1) * r, (j + 1) * n)
    for br in range(j + 1):
        for bc in range(br, j + 1):
            blk = code.coeff(nu - (bc - br))
            if blk is not None:
                _place(M.rows, blk, br * r, bc * n)
    return M


def reverse_code(code: ConvCode) -> ConvCode:
    """The code with parity-check ``H_nu + H_{nu-1} z + ... + H_0 z^nu``."""
    return ConvCode(code.field, code.n, code.k, code.delta, list(reversed(code.H)))


def sylvester_matrix(code: ConvCode) -> GFMatrix:
    """``2nu x 2nu`` Sylvester matrix of ``h_1, h_2`` as formal degree-nu polynomials."""
    if (code.n, code.k) != (2, 1):
        raise CodeError("resultant is defined here for rate 1/2 codes only")
    nu = code.nu
    size = 2 * nu
    M = GFMatrix.zeros(code.field, size, size)
    for col, base in ((0, 0), (1, nu)):
        coeffs = [code.H[i][0][col] for i in range(nu, -1, -1)]
        for s in range(nu):
            M.rows[base + s][s:s + nu + 1] = coeffs
    return M


def resultant(code: ConvCode) -> int:
    """Resultant of the two entries of a rate-1/2 parity-check matrix."""
    return sylvester_matrix(code).det()


def maximal_minor_gcd(code: ConvCode) -> list[int]:
    """Monic gcd of all ``(n-k) x (n-k)`` minors of ``H(z)`` (``[]`` if all vanish)."""
    F = code.field
    r = code.params.r
    entries = [[code.poly_entry(i, c) for c in range(code.n)] for i in range(r)]
    g: list[int] = []
    for cols in combinations(range(code.n), r):
        minor = poly.det(F, [[entries[i][c] for c in cols] for i in range(r)])
        g = poly.gcd(F, g, minor)
        if g == [1]:
            break
    return g


def is_left_prime(code: ConvCode, method: str = "auto") -> bool:
    """Whether ``H(z)`` has a polynomial right inverse.

    ``method`` is ``"gcd"`` (gcd of maximal minors), ``"resultant"`` (rate 1/2
    only) or ``"auto"``, which uses the resultant for rate-1/2 codes whose
    leading coefficient row is nonzero and the gcd otherwise.
    """
    if method == "resultant" or (
        method == "auto" and (code.n, code.k) == (2, 1) and code.nu > 0 and any(code.H[-1][0])
    ):
        return resultant(code) != 0
    if method not in ("auto", "gcd"):
        raise ValueError(f"unknown method {method!r}")
    return maximal_minor_gcd(code) == [1]


__all__ = [
    "CodeError",
    "CodeParams",
    "ConvCode",
    "code_new",
    "is_left_prime",
    "maximal_minor_gcd",
    "parse_code",
    "partial_matrix",
    "resultant",
    "reverse_code",
    "reverse_sliding_matrix",
    "sliding_matrix",
    "sylvester_matrix",
]
