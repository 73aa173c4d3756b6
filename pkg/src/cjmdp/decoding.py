"""Streaming encoder, erasure patterns and erasure decoders.

Symbols are addressed by a flat index ``step * n + component``.  A stream of
``N`` steps is checked by the equations ``sum_i H_i v_{tau-i} = 0`` for
``tau = 0 .. N-1+nu``; steps before 0 are zero, steps from ``N`` on are zero
for a terminated stream and unknown otherwise.

Three decoders share one window solver:

* :func:`decode_low_delay` walks forward and gives up on a step once the
  delay budget ``T`` is exhausted,
* :func:`decode_windowed` repeatedly solves every window of up to ``j+1``
  consecutive equations until nothing changes, which covers forward,
  backward and restart decoding at once,
* :func:`decode_oracle` solves the whole stream in one system.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

from .code import CodeError, ConvCode, parse_code
from .linalg import determined, det, nullspace
from .minors import complete_index

Vector = list[int]


# patterns -------------------------------------------------------------------


class PatternError(ValueError):
    pass


@dataclass(frozen=True)
class ErasurePattern:
    """Per-symbol erasure flags, read in groups of ``n`` per time step."""

    erased: tuple[bool, ...]
    n: int = 2

    def __post_init__(self):
        if self.n <= 0 or len(self.erased) % self.n:
            raise PatternError(f"pattern length {len(self.erased)} is not a multiple of n={self.n}")

    def __len__(self) -> int:
        return len(self.erased)

    @property
    def steps(self) -> int:
        return len(self.erased) // self.n

    @property
    def count(self) -> int:
        return sum(self.erased)

    def positions(self) -> list[int]:
        return [i for i, e in enumerate(self.erased) if e]

    def __str__(self) -> str:
        return render_pattern(self)


_PATTERN_CHARS = re.compile(r"[.x|\s]*")


def parse_pattern(text: str, n: int = 2) -> ErasurePattern:
    """Parse ``.``/``x`` symbols with optional ``|`` step separators."""
    if not _PATTERN_CHARS.fullmatch(text):
        bad = next(ch for ch in text if ch not in ".x|" and not ch.isspace())
        raise PatternError(f"unexpected character {bad!r} in pattern")
    body = "".join(text.split())
    if "|" in body:
        groups = body.split("|")
        for g in groups:
            if len(g) % n or not g:
                raise PatternError(f"group {g!r} does not align with n={n}")
        body = "".join(groups)
    return ErasurePattern(tuple(ch == "x" for ch in body), n)


def render_pattern(pattern: ErasurePattern) -> str:
    n = pattern.n
    chars = "".join("x" if e else "." for e in pattern.erased)
    return "|".join(chars[i:i + n] for i in range(0, len(chars), n))


def gen_pattern(spec: str | dict, length: int, seed: int | None = None, n: int = 2) -> ErasurePattern:
    """Generate a pattern of ``length`` symbols.

    ``spec`` is ``"iid:<rate>"``, ``"burst:<start>:<len>"`` or
    ``"explicit:<pattern>"`` (or the equivalent dict with key ``kind``).
    """
    if isinstance(spec, str):
        kind, _, rest = spec.partition(":")
        args = rest.split(":") if rest else []
    else:
        kind = spec.get("kind", "")
        args = [str(spec[k]) for k in ("rate", "start", "len", "pattern") if k in spec]
    if length % n:
        raise PatternError(f"length {length} is not a multiple of n={n}")
    if kind == "iid":
        rate = float(args[0]) if args else 0.0
        if not 0.0 <= rate <= 1.0:
            raise PatternError("erasure rate must lie in [0, 1]")
        rng = random.Random(seed)
        return ErasurePattern(tuple(rng.random() < rate for _ in range(length)), n)
    if kind == "burst":
        start, size = int(args[0]), int(args[1])
        return ErasurePattern(tuple(start <= i < start + size for i in range(length)), n)
    if kind == "explicit":
        pat = parse_pattern(":".join(args), n)
        if len(pat) != length:
            raise PatternError(f"explicit pattern has {len(pat)} symbols, expected {length}")
        return pat
    raise PatternError(f"unknown pattern kind {kind!r}")


# streams ----------------------------------------------------------------------


@dataclass
class ReceivedStream:
    """Received symbols of one codeword; ``None`` marks an erasure."""

    code: ConvCode
    values: list[int | None]
    terminated: bool = True

    def __post_init__(self):
        if len(self.values) % self.code.n:
            raise CodeError(f"stream length {len(self.values)} is not a multiple of n={self.code.n}")
        F = self.code.field
        self.values = [None if v is None else F.check(int(v)) for v in self.values]

    @property
    def steps(self) -> int:
        return len(self.values) // self.code.n

    def erased(self) -> list[int]:
        return [i for i, v in enumerate(self.values) if v is None]

    @classmethod
    def from_codeword(cls, code: ConvCode, codeword: Sequence[int], pattern: ErasurePattern, terminated: bool = True):
        if len(codeword) != len(pattern):
            raise PatternError(f"codeword has {len(codeword)} symbols, pattern {len(pattern)}")
        vals = [None if e else int(v) for v, e in zip(codeword, pattern.erased)]
        return cls(code, vals, terminated)

    def to_dict(self) -> dict:
        return {"code": self.code.to_dict(), "symbols": list(self.values), "terminated": self.terminated}

    @classmethod
    def from_dict(cls, data: dict) -> ReceivedStream:
        code = data["code"]
        code = ConvCode.from_dict(code) if isinstance(code, dict) else parse_code(str(code))
        return cls(code, data["symbols"], bool(data.get("terminated", True)))

    @classmethod
    def load(cls, path: str | Path) -> ReceivedStream:
        return cls.from_dict(json.loads(Path(path).read_text()))


@dataclass
class DecodeReport:
    recovered: dict[int, int] = dc_field(default_factory=dict)
    lost: set[int] = dc_field(default_factory=set)
    residual: list[int | None] = dc_field(default_factory=list)
    algorithm: str = ""

    @property
    def max_delay(self) -> int | None:
        return max(self.recovered.values()) if self.recovered else None

    @property
    def complete(self) -> bool:
        return not self.lost

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "recovered": {str(k): v for k, v in sorted(self.recovered.items())},
            "lost": sorted(self.lost),
            "max_delay": self.max_delay,
            "residual": self.residual,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


# encoding ---------------------------------------------------------------------


def information_positions(code: ConvCode) -> tuple[list[int], list[int]]:
    """Lexicographically first ``k`` positions whose complement in ``H_0`` is invertible."""
    F = code.field
    H0 = code.H[0]
    for info in combinations(range(code.n), code.k):
        par = [c for c in range(code.n) if c not in info]
        if det(F, [[row[c] for c in par] for row in H0]):
            return list(info), par
    raise CodeError("H_0 has no invertible (n-k)x(n-k) submatrix")


def _step_equation_rhs(code: ConvCode, steps: list[Vector], t: int) -> list[int]:
    """``sum_{i>=1} H_i v_{t-i}`` for the steps already encoded."""
    F = code.field
    acc = [0] * code.params.r
    for i in range(1, code.nu + 1):
        if t - i < 0:
            break
        v = steps[t - i]
        for rho, row in enumerate(code.H[i]):
            acc[rho] = F.add(acc[rho], F.dot(row, v))
    return acc


def _generator_columns(code: ConvCode) -> list[list[list[int]]]:
    """Polynomial kernel basis of a one-row ``H(z)``: ``h_p e_i - h_i e_p`` for ``i != p``."""
    if code.params.r != 1:
        raise CodeError("generator path needs exactly one parity row")
    F = code.field
    p = information_positions(code)[1][0]
    entries = [code.poly_entry(0, c) for c in range(code.n)]
    cols = []
    for i in range(code.n):
        if i == p:
            continue
        col = [[] for _ in range(code.n)]
        col[i] = entries[p]
        col[p] = [F.neg(x) for x in entries[i]]
        cols.append(col)
    return cols


def encode_stream(code: ConvCode, message: Sequence[Sequence[int]], method: str = "systematic") -> list[Vector]:
    """Encode ``k``-vectors per time step into ``n``-vectors satisfying ``H(z) v(z) = 0``.

    ``"systematic"`` places each message vector in the information positions
    and solves the parity positions step by step; the output has as many
    steps as the message and is not terminated.  ``"generator"`` (one parity
    row only) multiplies by the cofactor generator, giving a polynomial
    codeword with ``nu`` extra steps that ends in zeros.
    """
    F = code.field
    k, n = code.k, code.n
    msg = [[F.check(int(x)) for x in m] for m in message]
    if any(len(m) != k for m in msg):
        raise CodeError(f"message vectors must have length k={k}")
    if method == "generator":
        cols = _generator_columns(code)
        out = [[0] * n for _ in range(len(msg) + code.nu)]
        for t, m in enumerate(msg):
            for u, col in zip(m, cols):
                if not u:
                    continue
                for comp, poly_ in enumerate(col):
                    for d, g in enumerate(poly_):
                        out[t + d][comp] = F.add(out[t + d][comp], F.mul(u, g))
        return out
    if method != "systematic":
        raise ValueError(f"unknown encoding method {method!r}")
    info, par = information_positions(code)
    H0 = code.H[0]
    A = [[row[c] for c in par] for row in H0]
    steps: list[Vector] = []
    for t, m in enumerate(msg):
        v = [0] * n
        for pos, x in zip(info, m):
            v[pos] = x
        rhs = _step_equation_rhs(code, steps, t)
        for rho, row in enumerate(H0):
            rhs[rho] = F.add(rhs[rho], F.dot([row[c] for c in info], m))
        sol = determined(F, A, [F.neg(x) for x in rhs])
        for idx, pos in enumerate(par):
            v[pos] = sol[idx]
        steps.append(v)
    return steps


def flatten(steps: Iterable[Sequence[int]]) -> list[int]:
    return [x for v in steps for x in v]


def syndrome(code: ConvCode, symbols: Sequence[int], terminated: bool = True) -> list[int]:
    """Left-hand sides of all parity equations of a full stream (all zero for a codeword)."""
    F = code.field
    n, nu = code.n, code.nu
    N = len(symbols) // n
    last = N - 1 + nu if terminated else N - 1
    out = []
    for tau in range(last + 1):
        for rho in range(code.params.r):
            acc = 0
            for i in range(nu + 1):
                s = tau - i
                if 0 <= s < N:
                    acc = F.add(acc, F.dot(code.H[i][rho], symbols[s * n:(s + 1) * n]))
            out.append(acc)
    return out


@lru_cache(maxsize=64)
def _terminated_basis(code: ConvCode, steps: int) -> tuple[tuple[int, ...], ...]:
    n, nu, r = code.n, code.nu, code.params.r
    rows = []
    for tau in range(steps + nu):
        for rho in range(r):
            row = [0] * (steps * n)
            for i in range(nu + 1):
                s = tau - i
                if 0 <= s < steps:
                    row[s * n:(s + 1) * n] = code.H[i][rho]
            rows.append(row)
    return tuple(tuple(v) for v in nullspace(code.field, rows))


def random_codeword(code: ConvCode, steps: int, rng: random.Random, terminated: bool = True) -> list[int]:
    """Uniformly random codeword of ``steps`` time steps.

    Terminated codewords are drawn from the kernel of the full banded system,
    so they also satisfy the ``nu`` trailing equations.
    """
    F = code.field
    if terminated:
        basis = _terminated_basis(code, steps)
        out = [0] * (steps * code.n)
        for b in basis:
            c = rng.randrange(F.q)
            if c:
                out = [F.add(x, F.mul(c, y)) for x, y in zip(out, b)]
        return out
    msg = [[rng.randrange(F.q) for _ in range(code.k)] for _ in range(steps)]
    return flatten(encode_stream(code, msg))


# decoding ---------------------------------------------------------------------


class _State:
    """Known values of a stream, extended by ``nu`` steps past its end."""

    def __init__(self, stream: ReceivedStream):
        code = stream.code
        self.code = code
        self.F = code.field
        self.n = code.n
        self.N = stream.steps
        self.nu = code.nu
        self.last_eq = self.N - 1 + self.nu
        tail = [0 if stream.terminated else None] * (self.nu * self.n)
        self.values: list[int | None] = list(stream.values) + tail
        self.erased = set(stream.erased())

    def value(self, step: int, comp: int) -> int | None:
        if step < 0:
            return 0
        return self.values[step * self.n + comp]

    def system(self, tau1: int, tau2: int, first_step: int | None = None, forget: frozenset = frozenset()):
        """Equations ``tau1..tau2`` over the unknown symbols of steps ``first_step..tau2``.

        Steps before ``first_step`` must not enter the equations (callers
        choose ``tau1 >= first_step + nu``).  Symbols in ``forget`` are
        treated as unknown even if their value is known.
        Returns ``(unknowns, A, b)`` with ``unknowns`` flat symbol indices.
        """
        F, n, nu, code = self.F, self.n, self.nu, self.code
        first = tau1 - nu if first_step is None else first_step
        unknowns: list[int] = []
        index: dict[int, int] = {}
        for s in range(max(first, 0), tau2 + 1):
            for comp in range(n):
                sym = s * n + comp
                if self.values[sym] is None or sym in forget:
                    index[sym] = len(unknowns)
                    unknowns.append(sym)
        A, b = [], []
        for tau in range(tau1, tau2 + 1):
            for rho in range(code.params.r):
                row = [0] * len(unknowns)
                acc = 0
                for i in range(nu + 1):
                    s = tau - i
                    if s < 0:
                        continue
                    coeffs = code.H[i][rho]
                    for comp in range(n):
                        h = coeffs[comp]
                        if not h:
                            continue
                        sym = s * n + comp
                        col = index.get(sym)
                        if col is not None:
                            row[col] = h
                        else:
                            acc = F.add(acc, F.mul(h, self.values[sym]))
                A.append(row)
                b.append(F.neg(acc))
        return unknowns, A, b

    def solve(self, tau1: int, tau2: int, first_step: int | None = None) -> dict[int, int]:
        """Forced values of the erased stream symbols in a window."""
        unknowns, A, b = self.system(tau1, tau2, first_step)
        if not unknowns or not A:
            return {}
        sol = determined(self.F, A, b)
        return {unknowns[c]: v for c, v in sol.items() if unknowns[c] in self.erased}

    def residual(self) -> list[int | None]:
        return self.values[: self.N * self.n]


def decode_low_delay(code: ConvCode, stream: ReceivedStream, T: int, partial: bool = False) -> DecodeReport:
    """Sequential decoding with delay at most ``T`` steps.

    At the first step ``i`` with open erasures, grow ``j = 0..T`` and solve
    the equations ``t+nu .. i+j`` over steps ``t .. i+j`` with
    ``t = max(i-nu, c)``, where ``c`` is the last step given up on.  When the
    erasures of ``v_i`` are forced they are written back together with every
    other forced erasure of ``v_i .. v_{i+j}`` (earlier lost steps stay
    unknown); at ``j = T`` the rest of ``v_i`` is declared lost and ``c = i``.  With ``partial=True`` forced components of
    ``v_i`` are kept even if others in the same step stay unknown.
    """
    if T < 0:
        raise ValueError("delay T must be non-negative")
    st = _State(stream)
    n, nu = st.n, st.nu
    report = DecodeReport(algorithm="low-delay")
    c = -(nu + 1)
    for i in range(st.N):
        own = [i * n + comp for comp in range(n) if st.values[i * n + comp] is None]
        if not own:
            continue
        open_ = set(own)
        for j in range(T + 1):
            t = max(i - nu, c)
            s = i + j - t - nu
            tau2 = min(i + j, st.last_eq)
            if s < 0 or tau2 < t + nu:
                continue
            sol = st.solve(t + nu, tau2, first_step=t)
            hit = {sym: v for sym, v in sol.items() if sym in open_}
            if len(hit) == len(open_):
                for sym, v in sol.items():
                    if st.values[sym] is None and i <= sym // n <= min(i + j, st.N - 1):
                        st.values[sym] = v
                        report.recovered[sym] = i + j - sym // n
                open_.clear()
                break
            if partial and hit:
                for sym, v in hit.items():
                    st.values[sym] = v
                    report.recovered[sym] = j
                    open_.discard(sym)
        if open_:
            report.lost.update(open_)
            c = i
    report.residual = st.residual()
    return report


def decode_windowed(code: ConvCode, stream: ReceivedStream, j: int | None = None) -> DecodeReport:
    """Iterate window decoding to a fixed point.

    Every window of ``1 .. j+1`` consecutive equations is solved over the
    unknowns of the steps it touches; this contains the forward sliding
    systems, the backward (reverse code) systems and the restart systems of
    the partial parity-check matrices up to index ``j``.  ``j`` defaults to
    the largest index for which the code is complete j-MDP (0 if none).
    Passes repeat until one recovers nothing.
    """
    if j is None:
        j = max(complete_index(code), 0)
    st = _State(stream)
    n, nu = st.n, st.nu
    report = DecodeReport(algorithm="windowed")
    attempted: dict[tuple[int, int], int] = {}
    progress = True
    while progress and len(report.recovered) < len(st.erased):
        progress = False
        for span in range(j + 1):
            for tau1 in range(0, st.last_eq - span + 1):
                tau2 = tau1 + span
                lo, hi = max(tau1 - nu, 0) * n, min(tau2 + 1, st.N) * n
                open_count = sum(1 for sym in range(lo, hi) if st.values[sym] is None)
                if not open_count:
                    continue
                key = (tau1, tau2)
                if attempted.get(key) == len(report.recovered):
                    continue
                attempted[key] = len(report.recovered)
                sol = st.solve(tau1, tau2)
                for sym, v in sol.items():
                    if st.values[sym] is None:
                        st.values[sym] = v
                        report.recovered[sym] = max(min(tau2, st.N - 1) - sym // n, 0)
                        progress = True
    report.lost = st.erased - set(report.recovered)
    report.residual = st.residual()
    return report


def decode_oracle(code: ConvCode, stream: ReceivedStream) -> DecodeReport:
    """Solve all parity equations of the stream at once."""
    st = _State(stream)
    report = DecodeReport(algorithm="oracle")
    if st.erased:
        sol = st.solve(0, st.last_eq, first_step=0)
        last = st.N - 1
        for sym, v in sol.items():
            st.values[sym] = v
            report.recovered[sym] = last - sym // st.n
    report.lost = st.erased - set(report.recovered)
    report.residual = st.residual()
    return report


def decode(code: ConvCode, stream: ReceivedStream, algo: str = "windowed", delay: int | None = None, partial: bool = False) -> DecodeReport:
    """Dispatch by name: ``low-delay`` (needs ``delay``), ``windowed`` (``delay`` caps j), ``oracle``."""
    if algo == "low-delay":
        if delay is None:
            raise ValueError("low-delay decoding needs a delay")
        return decode_low_delay(code, stream, delay, partial)
    if algo == "windowed":
        return decode_windowed(code, stream, delay)
    if algo == "oracle":
        return decode_oracle(code, stream)
    raise ValueError(f"unknown algorithm {algo!r}")


# simulation -------------------------------------------------------------------


def window_counts(pattern: ErasurePattern, width: int) -> list[int]:
    """Erasure counts of every sliding window of ``width`` symbols."""
    e = [int(x) for x in pattern.erased]
    if width > len(e):
        return [sum(e)]
    run = sum(e[:width])
    out = [run]
    for i in range(width, len(e)):
        run += e[i] - e[i - width]
        out.append(run)
    return out


def simulate(
    code: ConvCode,
    steps: int,
    pattern_spec: str,
    trials: int,
    seed: int = 0,
    algo: str = "windowed",
    delay: int | None = None,
    terminated: bool = True,
    partial: bool = False,
) -> dict:
    """Random codewords through a random erasure channel; aggregate recovery statistics."""
    rng = random.Random(seed)
    n = code.n
    totals = {"erased": 0, "recovered": 0, "lost": 0, "complete_trials": 0, "value_errors": 0}
    delays: list[int] = []
    for _ in range(trials):
        word = random_codeword(code, steps, rng, terminated)
        pat = gen_pattern(pattern_spec, steps * n, rng.randrange(2**32), n)
        stream = ReceivedStream.from_codeword(code, word, pat, terminated)
        rep = decode(code, stream, algo, delay, partial)
        totals["erased"] += pat.count
        totals["recovered"] += len(rep.recovered)
        totals["lost"] += len(rep.lost)
        totals["complete_trials"] += int(not rep.lost)
        totals["value_errors"] += sum(1 for sym in rep.recovered if rep.residual[sym] != word[sym])
        delays.extend(rep.recovered.values())
    return {
        "field": code.field.spec(),
        "code": code.to_dict(),
        "algorithm": algo,
        "delay": delay,
        "steps": steps,
        "pattern": pattern_spec,
        "trials": trials,
        "seed": seed,
        **totals,
        "recovery_rate": totals["recovered"] / totals["erased"] if totals["erased"] else 1.0,
        "mean_delay": (sum(delays) / len(delays)) if delays else None,
        "max_delay": max(delays) if delays else None,
    }


__all__ = [
    "DecodeReport",
    "ErasurePattern",
    "PatternError",
    "ReceivedStream",
    "decode",
    "decode_low_delay",
    "decode_oracle",
    "decode_windowed",
    "encode_stream",
    "flatten",
    "gen_pattern",
    "information_positions",
    "parse_pattern",
    "random_codeword",
    "render_pattern",
    "simulate",
    "syndrome",
    "window_counts",
]

