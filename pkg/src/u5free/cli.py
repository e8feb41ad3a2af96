"""Command line: generate, certify, verify, solve and export tournaments.

Exit codes: 0 for any computed verdict, 1 when a verification fails, 2 for bad
input, 3 when a command refuses an input outside its contract.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .certificates import CertificateFormatError, dump_document, verify_document
from .core import Tournament, TournamentError, bits, popcount
from .detection import EnumerationLimit, canonical_form
from .fileformat import FormatError, read_tournament, render_tournament, to_dot
from .generators import KINDS, ParameterError, gen_family, gen_random, gen_random_u5free
from .structure import ForbiddenCopy, certify_u5_status
from .theorems import run_all
from .transitive import GammaBound, gamma_compare, max_transitive_exact, u5free_lower_bound_set

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_REFUSED = 3

RANDOM_KINDS = ("random", "random-u5free")


class InputError(Exception):
    pass


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(path: str) -> Tournament:
    try:
        return read_tournament(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except (FormatError, TournamentError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def cmd_gen(args: argparse.Namespace) -> int:
    kind = args.family
    try:
        if kind in RANDOM_KINDS:
            if args.n is None:
                raise ParameterError(f"{kind} needs a size")
            seed = 0 if args.seed is None else args.seed
            t = gen_random(args.n, seed) if kind == "random" else gen_random_u5free(args.n, seed)
        else:
            t = gen_family(kind, args.n)
    except ParameterError as exc:
        raise InputError(str(exc)) from exc
    _emit(render_tournament(t), args.out)
    return EXIT_OK


def cmd_certify(args: argparse.Namespace) -> int:
    t = _load(args.input)
    cert = certify_u5_status(t)
    if isinstance(cert, ForbiddenCopy):
        summary = "CONTAINS-U5 " + " ".join(map(str, cert.image))
    else:
        summary = "U5-FREE"
    doc = dump_document(cert, t.n)
    print(summary)
    if args.out:
        _emit(doc, args.out)
    else:
        sys.stdout.write(doc)
    return EXIT_OK


def cmd_verify_cert(args: argparse.Namespace) -> int:
    t = _load(args.tournament)
    try:
        with open(args.certificate, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {args.certificate}: {exc.strerror}") from exc
    try:
        problems = verify_document(t, text)
    except CertificateFormatError as exc:
        raise InputError(f"{args.certificate}: {exc}") from exc
    if problems:
        print("INVALID")
        for p in problems:
            print(f"  {p}")
        return EXIT_FAILED
    print("VALID")
    return EXIT_OK


def _verdict_text(size: int, n: int) -> str:
    c = gamma_compare(size, n)
    return {1: "exceeds n^γ", 0: "meets n^γ with equality", -1: "below n^γ"}[c]


def cmd_maxtrans(args: argparse.Namespace) -> int:
    t = _load(args.input)
    if args.mode == "exact":
        s = max_transitive_exact(t)
        print(f"size {popcount(s)}")
        print("vertices " + " ".join(map(str, bits(s))))
        return EXIT_OK
    cert = certify_u5_status(t)
    if isinstance(cert, ForbiddenCopy):
        print("refused: input contains U5 at vertices " + " ".join(map(str, cert.image)), file=sys.stderr)
        return EXIT_REFUSED
    s = u5free_lower_bound_set(t, cert)
    size = popcount(s)
    print(f"size {size}")
    print("vertices " + " ".join(map(str, bits(s))))
    if t.n:
        print(f"threshold {GammaBound(t.n)}")
        print(f"verdict {_verdict_text(size, t.n)}")
    return EXIT_OK


def cmd_export_dot(args: argparse.Namespace) -> int:
    _emit(to_dot(_load(args.input)), args.out)
    return EXIT_OK


def cmd_verify_theorems(args: argparse.Namespace) -> int:
    limit = 8 if args.opt_in_n8 else 7
    if args.max_n > limit:
        raise InputError(f"--max-n is limited to {limit}" + ("" if args.opt_in_n8 else " (8 needs --opt-in-n8)"))
    try:
        results = run_all(args.max_n, allow_n8=args.opt_in_n8, log=print)
    except EnumerationLimit as exc:
        raise InputError(str(exc)) from exc
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    if failed:
        for r in failed:
            if r.counterexample is not None:
                print(f"counterexample for {r.name} n={r.n}:")
                sys.stdout.write(render_tournament(canonical_form(r.counterexample)))
        return EXIT_FAILED
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the main output to this file instead of stdout")
    common.add_argument("--seed", type=int, help="seed for random generators")

    parser = argparse.ArgumentParser(prog="u5free", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="write a tournament file")
    p.add_argument("family", choices=KINDS + RANDOM_KINDS)
    p.add_argument("n", type=int, nargs="?", help="size (k for extremalG; omitted for Q7)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("certify", parents=[common], help="decide U5-freeness with a certificate")
    p.add_argument("input")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify-cert", parents=[common], help="check a certificate by direct scan")
    p.add_argument("tournament")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify_cert)

    p = sub.add_parser("maxtrans", parents=[common], help="largest or guaranteed transitive subtournament")
    p.add_argument("input")
    p.add_argument("--mode", choices=("exact", "bound"), default="exact")
    p.set_defaults(func=cmd_maxtrans)

    p = sub.add_parser("export-dot", parents=[common], help="write a DOT digraph")
    p.add_argument("input")
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("verify-theorems", parents=[common], help="run the exhaustive small-case checks")
    p.add_argument("--max-n", type=int, default=7)
    p.add_argument("--opt-in-n8", action="store_true", help="allow --max-n 8 (slow)")
    p.set_defaults(func=cmd_verify_theorems)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
