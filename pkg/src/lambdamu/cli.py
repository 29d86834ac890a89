"""Command-line front end: ``lmu <subcommand> ...``."""

from __future__ import annotations

import argparse
import os
import random
import sys

from .judgements import DerivationError, DerivationSyntaxError, check_derivation, format_derivation, format_judgement, parse_derivation
from .parigot import (
    FormulaSyntaxError, SimpleDerivationError, check_simple, format_simple_derivation,
    parse_formula, parse_simple_derivation, translate_derivation, translate_type,
)
from .reduction import SN, FuelExhausted, Strategy, normalize, sn_classify
from .synthesis import Typed, synthesize
from .syntax import LambdaMuSyntaxError, parse_term, print_term
from .types import SortError, TypeSyntaxError, format_certificate, length_c, parse_type, print_type, subtype

PARSE_ERRORS = (LambdaMuSyntaxError, TypeSyntaxError, SortError, FormulaSyntaxError,
                DerivationSyntaxError, SimpleDerivationError)


class UsageError(Exception):
    pass


def _color(text: str, code: str) -> str:
    if os.environ.get("LMU_COLOR") == "1":
        return f"\x1b[{code}m{text}\x1b[0m"
    return text


def _read_arg(value: str) -> str:
    return sys.stdin.read() if value == "-" else value


def _read_file(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _term(value: str):
    return parse_term(_read_arg(value).strip())


def _ctx(text: str | None, parse) -> dict:
    out = {}
    for entry in filter(None, (e.strip() for e in (text or "").split(","))):
        name, sep, body = entry.partition(":")
        if not sep or not name.strip().isidentifier():
            raise UsageError(f"malformed context entry {entry!r}")
        out[name.strip()] = parse(body)
    return out


# -- subcommands -------------------------------------------------------------

def cmd_parse(args, out) -> int:
    out.write(print_term(_term(args.term)) + "\n")
    return 0


def cmd_normalize(args, out) -> int:
    strategy = Strategy.LOR if args.strategy == "lor" else Strategy.FULL_LEFTMOST
    try:
        nf, trace = normalize(_term(args.term), strategy, args.fuel)
    except FuelExhausted as exc:
        for step in exc.trace.steps:
            out.write(f"{step}\n")
        out.write(f"UNKNOWN fuel={args.fuel}\n")
        return 1
    for step in trace.steps:
        out.write(f"{step}\n")
    out.write(print_term(nf) + "\n")
    return 0


def cmd_sn(args, out) -> int:
    verdict = sn_classify(_term(args.term), args.fuel)
    out.write(f"{verdict}\n")
    return 0 if isinstance(verdict, SN) else 1


def cmd_synth(args, out) -> int:
    res = synthesize(_term(args.term), args.fuel)
    out.write(f"{res}\n")
    return 0 if isinstance(res, Typed) else 1


def cmd_check_deriv(args, out) -> int:
    d = parse_derivation(_read_file(args.file))
    try:
        j = check_derivation(d)
    except DerivationError as exc:
        out.write(f"INVALID {exc}\n")
        return 1
    out.write(f"VALID {format_judgement(j)}\n")
    return 0


def cmd_subtype(args, out) -> int:
    sort = args.sort.upper()
    s = parse_type(_read_arg(args.lhs), sort)
    t = parse_type(_read_arg(args.rhs), sort)
    cert = subtype(s, t, sort)
    if cert is None:
        out.write("NO\n")
        return 1
    out.write("YES\n")
    if args.cert:
        out.write(format_certificate(cert) + "\n")
    return 0


def cmd_type_len(args, out) -> int:
    out.write(f"{length_c(parse_type(_read_arg(args.type), 'C'))}\n")
    return 0


def cmd_simple_check(args, out) -> int:
    g = _ctx(args.basis, parse_formula)
    d = _ctx(args.names, parse_formula)
    sd = check_simple(g, _term(args.term), parse_formula(args.type), d)
    if sd is None:
        out.write("NONE\n")
        return 1
    out.write(format_simple_derivation(sd) + "\n")
    return 0


def cmd_translate_type(args, out) -> int:
    out.write(print_type(translate_type(parse_formula(_read_arg(args.formula)), args.sort.upper())) + "\n")
    return 0


def cmd_translate_deriv(args, out) -> int:
    sd = parse_simple_derivation(_read_file(args.file))
    out.write(format_derivation(translate_derivation(sd)) + "\n")
    return 0


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lmu", description="Lambda-mu workbench with intersection and product types.")
    p.add_argument("--seed", type=int, default=0, help="seed for any randomized behaviour (default 0)")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def term_cmd(name, fn, help_text, fuel=None):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("term", help="a term, or - for standard input")
        if fuel is not None:
            sp.add_argument("--fuel", type=int, default=fuel)
        sp.set_defaults(func=fn)
        return sp

    term_cmd("parse", cmd_parse, "parse and print a term")
    sp = term_cmd("normalize", cmd_normalize, "reduce to normal form, printing each step", fuel=1000)
    sp.add_argument("--strategy", choices=("lor", "full"), default="lor")
    term_cmd("sn", cmd_sn, "classify strong normalisation", fuel=10000)
    term_cmd("synth", cmd_synth, "synthesize a typing derivation", fuel=1000)

    sp = sub.add_parser("check-deriv", help="validate a derivation file")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_check_deriv)

    sp = sub.add_parser("subtype", help="decide the preorder on types")
    sp.add_argument("--sort", choices=("d", "c"), required=True)
    sp.add_argument("--cert", action="store_true", help="also print the certificate")
    sp.add_argument("lhs")
    sp.add_argument("rhs")
    sp.set_defaults(func=cmd_subtype)

    sp = sub.add_parser("type-len", help="length of a continuation type")
    sp.add_argument("type")
    sp.set_defaults(func=cmd_type_len)

    sp = term_cmd("simple-check", cmd_simple_check, "check a simple typing judgement")
    sp.add_argument("--type", required=True, help="the formula")
    sp.add_argument("--basis", default="", help="x:A, y:B")
    sp.add_argument("--names", default="", help="a:A, b:B")

    sp = sub.add_parser("translate-type", help="translate a formula")
    sp.add_argument("formula")
    sp.add_argument("--sort", choices=("d", "c"), default="d")
    sp.set_defaults(func=cmd_translate_type)

    sp = sub.add_parser("translate-deriv", help="translate a simple derivation file")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_translate_deriv)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    random.seed(args.seed)
    try:
        return args.func(args, out)
    except (UsageError, *PARSE_ERRORS) as exc:
        sys.stderr.write(_color("error", "31") + f": {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
