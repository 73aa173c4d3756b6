"""Command-line front end.

Every command prints one JSON document (or a plain table with ``--pretty``).
Exit status is 0 on success, 2 on invalid input and 1 when ``--assert`` is
given and the checked property does not hold.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .code import CodeError, parse_code
from .decoding import PatternError, ReceivedStream, decode, gen_pattern, render_pattern, simulate
from .gf import FieldError, parse_field
from .minors import (
    OracleTooLarge,
    column_distance_oracle,
    is_complete_j_mdp,
    is_jth_distance_maximal,
    is_mdp,
    is_reverse_mdp,
)
from .search import SearchSpec, SearchTooLarge, search, verify_family


class UsageError(Exception):
    pass


def _emit(data: dict | str, pretty: bool = False) -> None:
    if isinstance(data, str):
        print(data)
    elif pretty:
        width = max((len(k) for k in data), default=0)
        for key, value in data.items():
            if isinstance(value, (list, dict)):
                value = json.dumps(value)
            print(f"{key:<{width}}  {value}")
    else:
        print(json.dumps(data, ensure_ascii=False))


def _alpha_values(field, values):
    return [None if v is None else field.to_alpha(v) for v in values]


def cmd_check(args) -> int:
    code = parse_code(args.code)
    prop = args.property
    if prop == "complete-j-mdp":
        rep = is_complete_j_mdp(code, _need_j(args))
    elif prop == "column-distance":
        rep = is_jth_distance_maximal(code, _need_j(args))
    elif prop == "mdp":
        rep = is_mdp(code)
    else:
        rep = is_reverse_mdp(code)
    _emit(rep.to_dict(), args.pretty)
    return 1 if args.assert_ and not rep.holds else 0


def _need_j(args) -> int:
    if args.j is None:
        raise UsageError("--j is required for this property")
    return args.j


def cmd_distance(args) -> int:
    code = parse_code(args.code)
    if not 0 <= args.j:
        raise UsageError("--j must be non-negative")
    d = column_distance_oracle(code, args.j)
    bound = code.params.r * (args.j + 1) + 1
    _emit({"j": args.j, "column_distance": d, "upper_bound": bound, "attains_bound": d == bound}, args.pretty)
    return 0


def cmd_decode(args) -> int:
    stream = ReceivedStream.load(args.stream)
    code = parse_code(args.code) if args.code else stream.code
    if code != stream.code:
        stream = ReceivedStream(code, stream.values, stream.terminated)
    rep = decode(code, stream, args.algo, args.delay, args.partial)
    out = rep.to_dict()
    if args.alpha:
        out["residual"] = _alpha_values(code.field, rep.residual)
    _emit(out, args.pretty)
    return 0


def cmd_simulate(args) -> int:
    code = parse_code(args.code)
    stats = simulate(
        code, args.steps, args.pattern, args.trials, args.seed, args.algo, args.delay,
        terminated=not args.unterminated, partial=args.partial,
    )
    _emit(stats, args.pretty)
    return 0


def cmd_search(args) -> int:
    F = parse_field(args.field)
    spec = SearchSpec(
        F, args.n, args.k, args.delta, args.j,
        normalize=not args.no_normalize,
        mode="exhaustive" if args.mode == "exhaustive" else "random",
        trials=args.trials, seed=args.seed, threads=args.threads,
    )
    rep = search(spec)
    out = rep.to_dict(alpha=args.alpha)
    if args.out:
        path = Path(args.out)
        path.write_text(rep.to_csv() if path.suffix == ".csv" else json.dumps(out) + "\n")
    _emit(out, args.pretty)
    return 0


def cmd_verify_family(args) -> int:
    q = int(args.field)
    if q not in (13, 16):
        raise UsageError("--field must be 13 or 16")
    res = verify_family(q)
    _emit(res.to_dict(), args.pretty)
    return 1 if args.assert_ and not res.ok else 0


def cmd_gen_pattern(args) -> int:
    pat = gen_pattern(args.spec, args.length, args.seed, args.n)
    _emit(render_pattern(pat))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cjmdp", description="Complete j-MDP convolutional code toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, code=True):
        if code:
            p.add_argument("--code", required=True, help="code JSON file, inline JSON, or compact 'q:h h|h h|h h'")
        p.add_argument("--pretty", action="store_true", help="plain-text table instead of JSON")

    p = sub.add_parser("check", help="check a distance property")
    common(p)
    p.add_argument("--property", required=True, choices=["complete-j-mdp", "mdp", "reverse-mdp", "column-distance"])
    p.add_argument("--j", type=int)
    p.add_argument("--assert", dest="assert_", action="store_true", help="exit 1 if the property fails")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("distance", help="exact column distance by enumeration")
    common(p)
    p.add_argument("--j", type=int, required=True)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("decode", help="decode a received stream")
    p.add_argument("--code", help="override the code stored in the stream file")
    p.add_argument("--pretty", action="store_true")
    p.add_argument("--stream", required=True)
    p.add_argument("--algo", choices=["low-delay", "windowed", "oracle"], default="windowed")
    p.add_argument("--delay", type=int, help="delay T (low-delay) or window index cap (windowed)")
    p.add_argument("--partial", action="store_true")
    p.add_argument("--alpha", action="store_true", help="print field elements as alpha polynomials")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("simulate", help="random codewords through an erasure channel")
    common(p)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--pattern", required=True, help="iid:<rate> | burst:<start>:<len> | explicit:<pattern>")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--algo", choices=["low-delay", "windowed", "oracle"], default="windowed")
    p.add_argument("--delay", type=int)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--partial", action="store_true")
    p.add_argument("--unterminated", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("search", help="search for complete j-MDP codes")
    p.add_argument("--field", required=True, help="q, p^r or p^r/modulus")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--delta", type=int, default=2)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--mode", choices=["exhaustive", "random", "randomized"], default="exhaustive")
    p.add_argument("--trials", type=int, default=0)
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--no-normalize", action="store_true")
    p.add_argument("--out", help="also write the report (.json) or solutions (.csv)")
    p.add_argument("--alpha", action="store_true")
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify-family", help="compare the closed-form family with exhaustive search")
    p.add_argument("--field", required=True)
    p.add_argument("--assert", dest="assert_", action="store_true")
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_verify_family)

    p = sub.add_parser("gen-pattern", help="generate an erasure pattern")
    p.add_argument("--spec", required=True)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--n", type=int, default=2)
    p.set_defaults(func=cmd_gen_pattern)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, CodeError, FieldError, PatternError, SearchTooLarge, OracleTooLarge,
            ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
