"""Command-line interface: ``ietlab <command> [options]``.

Every JSON document carries ``"schema": "ietlab/1"``.  Exit codes: 0 on
success, 2 when a verification fails (NotVerified, Keane failure), 1 on
usage or internal errors.  Progress goes to stderr only.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import List, Optional

from . import __version__
from .billiard import LTable, flow_mixing_check, suspension_data, transversal_iet
from .coding import hat_blocks, return_blocks
from .constructor import construct_mixing_iet
from .errors import ConstructionFailed, IETLabError
from .field import DEFAULT_SQRT, ExactNumber
from .iet import ExactIET, golden_rotation, induce_lattice
from .keane_paths import build_named_path, make_columns_coprime, make_proxy_coprime
from .mixing import FullShift, IETLanguage, alphabet_mixing_check, fibonacci_language
from .perm import as_permutation, classify
from .rauzy import enumerate_class, path_product, step

SCHEMA = "ietlab/1"
EXIT_OK, EXIT_ERROR, EXIT_NOT_VERIFIED = 0, 1, 2

log = logging.getLogger("ietlab")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


class _Usage(Exception):
    pass


# ---------------------------------------------------------------------------
# parsing helpers


def _number(text: str, N: int) -> ExactNumber:
    """``p/q``, a decimal, or ``a+b*sqrt`` written as ``a|b``."""
    text = text.strip()
    if "|" in text:
        a, b = text.split("|", 1)
        return ExactNumber(Fraction(a), Fraction(b), N)
    return ExactNumber(Fraction(text), 0, N)


def _iet_from_args(args) -> ExactIET:
    if getattr(args, "iet", None):
        with open(args.iet) as fh:
            data = json.load(fh)
        data = data.get("result", data)
        return ExactIET.from_json(data.get("iet", data))
    if not args.perm or not args.lengths:
        raise _Usage("give --iet FILE or both --perm and --lengths")
    N = args.sqrt
    lengths = [_number(x, N) for x in args.lengths.split(",")]
    return ExactIET(as_permutation(args.perm), lengths, N)


def _add_iet_args(p):
    p.add_argument("--iet", help="JSON file with an IET (or a document containing one)")
    p.add_argument("--perm", help="permutation in one-line notation, e.g. 4321")
    p.add_argument("--lengths", help="comma-separated lengths: p/q, decimals, or a|b for a+b*sqrt(N)")
    p.add_argument("--sqrt", type=int, default=DEFAULT_SQRT, help="N of the field Q(sqrt N)")


# ---------------------------------------------------------------------------
# commands; each returns (payload, text, exit code)


def cmd_class(args):
    graph = enumerate_class(args.perm)
    data = graph.to_json()
    data["classification"] = {p.compact(): classify(p).to_json() for p in graph.vertices}
    text = "\n".join(f"{src.compact()} -{mv.value}-> {dst.compact()}" for src, mv, dst in graph.edges)
    return data, text, EXIT_OK, graph.to_dot()


def cmd_step(args):
    q, M = step(args.perm, args.move)
    data = {"from": as_permutation(args.perm).to_json(), "move": args.move, "to": q.to_json(), "matrix": M.to_json()}
    return data, f"{as_permutation(args.perm).compact()} -{args.move}-> {q.compact()}\n{M}", EXIT_OK, None


def cmd_induce(args):
    T = _iet_from_args(args)
    ind = induce_lattice(T, args.steps)
    _, M = path_product(_path_of(T, ind.moves))
    S = ind.iet()
    data = {
        "iet": T.to_json(),
        "moves": "".join(m.value for m in ind.moves),
        "matrix": M.to_json(),
        "induced": S.to_json(),
    }
    text = f"moves {data['moves']}\nend {S.perm.compact()}\n{M}"
    return data, text, EXIT_OK, None


def _path_of(T, moves):
    from .rauzy import RauzyPath

    return RauzyPath(T.perm, tuple(moves))


def cmd_paths(args):
    named = build_named_path(args.kind, (args.m, args.n), args.d)
    _, M = path_product(named.path)
    data = named.to_json()
    data["matrix"] = M.to_json()
    text = f"{args.kind}({args.m},{args.n}) d={args.d}: {named.path.word()}\n{M}"
    return data, text, EXIT_OK, None


def cmd_coprime(args):
    if args.sums:
        cert = make_columns_coprime([int(x) for x in args.sums.split(",")], args.cap)
        data = cert.to_json()
        text = f"a={cert.chosen_a} b={cert.chosen_b} sums=({cert.col2_sum}, {cert.col3_sum})"
    elif args.perm:
        res = make_proxy_coprime(args.perm, args.cap)
        data = res.to_json()
        text = f"{res.kind.value} via {len(res.path)} moves; designated sums coprime"
    else:
        raise _Usage("give --sums or --perm")
    return data, text, EXIT_OK, None


def cmd_blocks(args):
    if args.hat:
        exprs = hat_blocks(args.hat, args.d, args.m, args.n)
        data = {"kind": args.hat, "d": args.d, "m": args.m, "n": args.n, "blocks": [e.to_json() for e in exprs]}
        text = "\n".join(f"B^{j + 1} = {e}" for j, e in enumerate(exprs))
        return data, text, EXIT_OK, None
    T = _iet_from_args(args)
    fam = return_blocks(T, args.steps, cross_check=True)
    data = fam.to_json()
    text = "\n".join(f"B_{j + 1} = {b}" for j, b in enumerate(fam.blocks))
    return data, text, EXIT_OK, None


def cmd_check_mixing(args):
    if args.language == "iet":
        lang = IETLanguage(_iet_from_args(args))
    elif args.language == "fibonacci":
        lang = fibonacci_language()
    elif args.language == "golden":
        lang = IETLanguage(golden_rotation())
    else:
        lang = FullShift(args.letters)
    rep = alphabet_mixing_check(lang, args.k, args.horizon, args.budget, threads=args.threads)
    code = EXIT_OK if rep.verified else EXIT_NOT_VERIFIED
    return rep.to_json(), rep.summary(), code, None


def cmd_construct(args):
    try:
        rep = construct_mixing_iet(
            args.perm,
            args.k,
            scale_p=args.scale,
            seed=args.seed,
            seed_mode=args.seed_mode,
            mixing_horizon=args.horizon,
            length_budget=args.budget,
            keane_horizon=args.keane_horizon,
            threads=args.threads,
        )
    except ConstructionFailed as exc:
        if exc.report is None:
            raise
        data = exc.report.to_json()
        data["success"] = False
        data["failure"] = str(exc)
        return data, str(exc), EXIT_NOT_VERIFIED, None
    data = rep.to_json()
    data["success"] = True
    text = (
        f"{rep.input_perm.compact()} k={rep.k}: path of {len(rep.path)} moves, "
        f"Keane to {rep.keane.verified_horizon}, mixing {rep.mixing.status} N={rep.mixing.N}"
    )
    return data, text, EXIT_OK, None


def cmd_billiard(args):
    N = args.sqrt
    table = LTable(*(_number(x, N) for x in (args.a, args.b, args.s, args.t, args.cot)))
    T = transversal_iet(table)
    sd = suspension_data(table)
    data = {"table": table.to_json(), "iet": T.to_json(), "suspension": sd.to_json()}
    text = f"{T}\nheights {sd.heights}"
    code = EXIT_OK
    if args.epsilon is not None:
        rep = flow_mixing_check(T, sd, args.k, args.epsilon, args.t_max, args.budget)
        data["flow"] = rep.to_json()
        text += f"\nflow {rep.status} T0={rep.T0}"
        code = EXIT_OK if rep.verified else EXIT_NOT_VERIFIED
    return data, text, code, None


# ---------------------------------------------------------------------------


GLOBAL_DEFAULTS = {"format": "json", "out": None, "threads": 1, "verbose": False}


def _add_global_args(p, default) -> None:
    p.add_argument("--format", choices=("json", "dot", "text"), default=default)
    p.add_argument("--out", default=default, help="write the result here instead of stdout")
    p.add_argument("--threads", type=int, default=default)
    p.add_argument("-v", "--verbose", action="store_true", default=default, help="progress on stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ietlab", description="Interval exchanges, Rauzy induction and alphabet mixing.")
    parser.add_argument("--version", action="version", version=__version__)
    _add_global_args(parser, argparse.SUPPRESS)
    # the same flags are accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    _add_global_args(common, argparse.SUPPRESS)
    parser.set_defaults(**GLOBAL_DEFAULTS)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    add = sub.add_parser

    def _sub(name, **kw):
        return add(name, parents=[common], **kw)

    sub.add_parser = _sub

    p = sub.add_parser("class", help="enumerate a Rauzy class")
    p.add_argument("--perm", required=True)
    p.set_defaults(func=cmd_class)

    p = sub.add_parser("step", help="one Rauzy step")
    p.add_argument("--perm", required=True)
    p.add_argument("--move", type=str.upper, choices=("A", "B"), required=True, help="engine move (A or B)")
    p.set_defaults(func=cmd_step)

    p = sub.add_parser("induce", help="run induction on an IET")
    _add_iet_args(p)
    p.add_argument("--steps", type=int, required=True)
    p.set_defaults(func=cmd_induce)

    p = sub.add_parser("paths", help="a named path and its matrix")
    p.add_argument("--kind", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, default=4)
    p.set_defaults(func=cmd_paths)

    p = sub.add_parser("coprime", help="coprime designated columns")
    p.add_argument("--sums", help="four column sums c1,c2,c3,c4")
    p.add_argument("--perm", help="run the proxy + coprimality route from this permutation")
    p.add_argument("--cap", type=int, default=10**6)
    p.set_defaults(func=cmd_coprime)

    p = sub.add_parser("blocks", help="return blocks of an IET, or a hat table")
    _add_iet_args(p)
    p.add_argument("--steps", type=int, default=0)
    p.add_argument("--hat", choices=("FourLetter", "Proxy", "Quasi"))
    p.add_argument("--d", type=int, default=4)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--n", type=int, default=1)
    p.set_defaults(func=cmd_blocks)

    p = sub.add_parser("check-mixing", help="k-alphabet mixing check")
    _add_iet_args(p)
    p.add_argument("--language", choices=("iet", "fibonacci", "golden", "fullshift"), default="iet")
    p.add_argument("--letters", type=int, default=2, help="alphabet size for fullshift")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--horizon", type=int, default=500)
    p.add_argument("--budget", type=int, default=5 * 10**4)
    p.set_defaults(func=cmd_check_mixing)

    p = sub.add_parser("construct", help="full construction pipeline")
    p.add_argument("--perm", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--scale", type=int, default=3, help="the p of the M1(p, p) path (capped at 5g)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--seed-mode", choices=("generic", "quadratic"), default="generic")
    p.add_argument("--horizon", type=int, default=500)
    p.add_argument("--budget", type=int, default=5 * 10**4)
    p.add_argument("--keane-horizon", type=int, default=10**4)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("billiard", help="L-shaped table to IET, optional flow check")
    for name in ("a", "b", "s", "t"):
        p.add_argument(f"--{name}", required=True)
    p.add_argument("--cot", required=True, help="cot(theta)")
    p.add_argument("--sqrt", type=int, default=DEFAULT_SQRT)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--t-max", type=float, default=2000.0)
    p.add_argument("--budget", type=int, default=2 * 10**4)
    p.set_defaults(func=cmd_billiard)
    return parser


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(name)s: %(message)s",
    )
    try:
        data, text, code, dot = args.func(args)
    except _Usage as exc:
        parser.exit(EXIT_ERROR, f"ietlab: error: {exc}\n")
    except (IETLabError, ValueError, OSError) as exc:
        print(f"ietlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.format == "dot":
        if dot is None:
            print("ietlab: error: --format dot is only available for 'class'", file=sys.stderr)
            return EXIT_ERROR
        _emit(dot, args.out)
    elif args.format == "text":
        _emit(text.rstrip("\n") + "\n", args.out)
    else:
        doc = {"schema": SCHEMA, "command": args.command, "result": data}
        _emit(json.dumps(doc, sort_keys=True, indent=2) + "\n", args.out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
