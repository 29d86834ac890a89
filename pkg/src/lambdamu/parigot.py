"""Parigot's simply typed fragment: formulas, checking, and translation into the intersection system."""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from typing import Mapping

from .judgements import Ctx, Derivation, Judgement, abs_, app, ax, mu_
from .syntax import Abs, App, Command, Mu, Term, Var, hygienize, is_hygienic, parse_term, print_term
from .types import NU, Arrow, Prod, ProdOmega

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PropVar:
    name: str


@dataclass(frozen=True)
class Impl:
    ant: "Formula"
    cons: "Formula"


Formula = PropVar | Impl


class FormulaSyntaxError(ValueError):
    pass


def print_formula(a: Formula) -> str:
    if isinstance(a, PropVar):
        return a.name
    left = print_formula(a.ant)
    if isinstance(a.ant, Impl):
        left = f"({left})"
    return f"{left} -> {print_formula(a.cons)}"


_FTOK = re.compile(r"\s*(?:(->)|([()])|([A-Za-z_][A-Za-z0-9_']*))")


def parse_formula(text: str) -> Formula:
    """``A := ident | A -> A | (A)``, with ``->`` associating to the right."""
    toks, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        mt = _FTOK.match(text, pos)
        if not mt:
            raise FormulaSyntaxError(f"unexpected character at offset {pos}: {text[pos:pos + 10]!r}")
        toks.append(mt.group(mt.lastindex))
        pos = mt.end()
    out, i = _formula(toks, 0)
    if i != len(toks):
        raise FormulaSyntaxError(f"trailing input: {' '.join(toks[i:])!r}")
    return out


def _formula(toks, i):
    if i >= len(toks):
        raise FormulaSyntaxError("unexpected end of formula")
    if toks[i] == "(":
        left, i = _formula(toks, i + 1)
        if i >= len(toks) or toks[i] != ")":
            raise FormulaSyntaxError("missing ')'")
        i += 1
    elif toks[i] in (")", "->"):
        raise FormulaSyntaxError(f"unexpected {toks[i]!r}")
    else:
        left, i = PropVar(toks[i]), i + 1
    if i < len(toks) and toks[i] == "->":
        right, i = _formula(toks, i + 1)
        return Impl(left, right), i
    return left, i


# -- derivations ---------------------------------------------------------------

SIMPLE_TAGS = ("Ax", "Mu1", "Mu2", "ImplI", "ImplE")


@dataclass(frozen=True)
class SimpleJudgement:
    basis: Ctx
    subject: Term
    formula: Formula
    names: Ctx

    def __str__(self):
        return format_simple_judgement(self)


@dataclass(frozen=True)
class SimpleDerivation:
    rule: str
    judgement: SimpleJudgement
    premises: tuple["SimpleDerivation", ...] = ()

    def nodes(self):
        stack = [self]
        while stack:
            d = stack.pop()
            yield d
            stack.extend(reversed(d.premises))

    def __str__(self):
        return format_simple_derivation(self)


class SimpleDerivationError(ValueError):
    pass


def _fmt_ctx(g: Mapping) -> str:
    return ", ".join(f"{k}:{print_formula(v)}" for k, v in sorted(g.items()))


def format_simple_judgement(j: SimpleJudgement) -> str:
    left, right = _fmt_ctx(j.basis), _fmt_ctx(j.names)
    return (f"{left + ' ' if left else ''}|- {print_term(j.subject)} : {print_formula(j.formula)}"
            f" |{' ' + right if right else ''}")


def format_simple_derivation(d: SimpleDerivation, indent: int = 0) -> str:
    pad = "  " * indent
    head = f"{pad}({d.rule} {{{format_simple_judgement(d.judgement)}}}"
    if not d.premises:
        return head + ")"
    kids = "\n".join(format_simple_derivation(p, indent + 1) for p in d.premises)
    return f"{head}\n{kids})"


def _parse_fctx(text: str) -> Ctx:
    out = {}
    for entry in filter(None, (e.strip() for e in text.split(","))):
        name, sep, f = entry.partition(":")
        if not sep or not name.strip().isidentifier():
            raise SimpleDerivationError(f"malformed context entry {entry!r}")
        out[name.strip()] = parse_formula(f)
    return Ctx(out)


def parse_simple_judgement(text: str) -> SimpleJudgement:
    left, sep, rest = text.partition("|-")
    typed, bar, right = rest.rpartition("|")
    subj, colon, f = typed.rpartition(":")
    if not (sep and bar and colon):
        raise SimpleDerivationError(f"malformed judgement {text.strip()!r}")
    return SimpleJudgement(_parse_fctx(left), parse_term(subj.strip()), parse_formula(f), _parse_fctx(right))


def parse_simple_derivation(text: str) -> SimpleDerivation:
    d, pos = _read(text, 0)
    if text[pos:].strip():
        raise SimpleDerivationError(f"trailing input at offset {pos}")
    return d


def _read(text, pos):
    pos = len(text) - len(text[pos:].lstrip())
    if text[pos:pos + 1] != "(":
        raise SimpleDerivationError(f"expected '(' at offset {pos}")
    mt = re.compile(r"\(\s*([A-Za-z0-9]+)\s*\{([^}]*)\}\s*").match(text, pos)
    if not mt or mt.group(1) not in SIMPLE_TAGS:
        raise SimpleDerivationError(f"expected a rule tag and judgement at offset {pos}")
    pos = mt.end()
    kids = []
    while text[pos:pos + 1] == "(":
        kid, pos = _read(text, pos)
        kids.append(kid)
        pos = len(text) - len(text[pos:].lstrip())
    if text[pos:pos + 1] != ")":
        raise SimpleDerivationError(f"expected ')' at offset {pos}")
    return SimpleDerivation(mt.group(1), parse_simple_judgement(mt.group(2)), tuple(kids)), pos + 1


def validate_simple(d: SimpleDerivation) -> SimpleJudgement:
    """Check every node against the rule schemas; returns the root judgement."""
    for node in d.nodes():
        _check_simple_node(node)
    return d.judgement


def _check_simple_node(d: SimpleDerivation):
    j, m, ps = d.judgement, d.judgement.subject, [p.judgement for p in d.premises]

    def bad(reason):
        raise SimpleDerivationError(f"{reason} at {d.rule} node {{{format_simple_judgement(j)}}}")

    arity = {"Ax": 0, "ImplI": 1, "ImplE": 2, "Mu1": 1, "Mu2": 1}.get(d.rule)
    if arity is None or len(ps) != arity:
        bad("wrong rule or number of premises")
    match d.rule:
        case "Ax":
            if not isinstance(m, Var) or j.basis.get(m.name) != j.formula:
                bad("variable not declared with this formula")
        case "ImplI":
            (p,) = ps
            if not isinstance(m, Abs) or not isinstance(j.formula, Impl):
                bad("expected an abstraction at an implication")
            if m.var in j.basis:
                bad(f"bound variable {m.var} occurs in the basis")
            if (p.subject != m.body or p.names != j.names or p.formula != j.formula.cons
                    or p.basis != j.basis.set(m.var, j.formula.ant)):
                bad("premise does not match")
        case "ImplE":
            f, a = ps
            if not isinstance(m, App) or f.subject != m.fun or a.subject != m.arg:
                bad("subjects do not match")
            if f.formula != Impl(a.formula, j.formula):
                bad("operator formula is not argument -> conclusion")
            for p in ps:
                if p.basis != j.basis or p.names != j.names:
                    bad("contexts differ")
        case "Mu1" | "Mu2":
            (p,) = ps
            if not isinstance(m, Mu) or (m.name == m.cmd.name) != (d.rule == "Mu1"):
                bad("rule does not match the command")
            a, b = m.name, m.cmd.name
            if a in j.names:
                bad(f"bound name {a} occurs in the name context")
            if p.basis != j.basis or p.subject != m.cmd.body or p.names != j.names.set(a, j.formula):
                bad("premise does not match")
            if p.formula != p.names.get(b):
                bad(f"premise formula is not the formula of {b}")


# -- checking ----------------------------------------------------------------

def check_simple(g: Mapping, m: Term, a: Formula, d: Mapping = Ctx()) -> SimpleDerivation | None:
    """A derivation of ``g |- m : a | d`` if the syntax-directed search finds one."""
    g, d = Ctx(g), Ctx(d)
    if not is_hygienic(m, set(g) | set(d)):
        renamed = hygienize(m, set(g) | set(d))
        log.info("renamed bound identifiers: %s became %s", print_term(m), print_term(renamed))
        m = renamed
    return _check(g, m, a, d)


def _check(g, m, a, d):
    match m:
        case Var(x):
            if g.get(x) == a:
                return SimpleDerivation("Ax", SimpleJudgement(g, m, a, d))
            return None
        case Abs(x, body):
            if not isinstance(a, Impl):
                return None
            p = _check(g.set(x, a.ant), body, a.cons, d)
            return p and SimpleDerivation("ImplI", SimpleJudgement(g, m, a, d), (p,))
        case Mu(al, Command(be, body)):
            inner = d.set(al, a)
            target = inner.get(be)
            if target is None:
                return None
            p = _check(g, body, target, inner)
            rule = "Mu1" if al == be else "Mu2"
            return p and SimpleDerivation(rule, SimpleJudgement(g, m, a, d), (p,))
        case App(f, n):
            inferred = _infer(g, f, d)
            if inferred is not None:
                df = inferred
                fa = df.judgement.formula
                if not isinstance(fa, Impl) or fa.cons != a:
                    return None
                dn = _check(g, n, fa.ant, d)
            else:
                dn = _infer(g, n, d)
                if dn is None:
                    return None
                df = _check(g, f, Impl(dn.judgement.formula, a), d)
            if df is None or dn is None:
                return None
            return SimpleDerivation("ImplE", SimpleJudgement(g, m, a, d), (df, dn))
    raise TypeError(m)


def _infer(g, m, d):
    """Bottom-up reconstruction for subjects whose formula is determined by the contexts."""
    match m:
        case Var(x):
            return _check(g, m, g[x], d) if x in g else None
        case App(f, n):
            df = _infer(g, f, d)
            if df is not None:
                fa = df.judgement.formula
                if isinstance(fa, Impl):
                    dn = _check(g, n, fa.ant, d)
                    if dn is not None:
                        return SimpleDerivation("ImplE", SimpleJudgement(g, m, fa.cons, d), (df, dn))
            return None
        case Mu(al, Command(be, body)) if al != be:
            # mu a.[b]M where the body is inferable and b is known; a occurs only in the body
            if be in d:
                for cand in _name_constraints(body, al, g, d):
                    res = _check(g, m, cand, d)
                    if res is not None:
                        return res
            return None
    return None


def _name_constraints(body, al, g, d):
    """Formulas that ``[al]N`` commands inside ``body`` force on ``al`` (when ``N`` is inferable)."""
    out = []
    stack = [body]
    while stack:
        t = stack.pop()
        match t:
            case Mu(_, Command(c, b)):
                if c == al:
                    r = _infer(g, b, d)
                    if r is not None:
                        out.append(r.judgement.formula)
                stack.append(b)
            case Abs(_, b):
                stack.append(b)
            case App(f, n):
                stack += [f, n]
    return list(dict.fromkeys(out))


# -- translation -------------------------------------------------------------

def translate_type(a: Formula, target: str = "D"):
    """``phi^C = nu*om``, ``(A -> B)^C = (A^C -> nu) * B^C``, ``A^D = A^C -> nu``."""
    target = target.upper()
    if target not in ("D", "C"):
        raise ValueError(f"unknown sort {target!r}")
    c = _to_c(a)
    return c if target == "C" else Arrow(c)


def _to_c(a: Formula):
    if isinstance(a, PropVar):
        return ProdOmega(NU)
    return Prod(Arrow(_to_c(a.ant)), _to_c(a.cons))


def translate_ctx(g: Mapping, target: str) -> Ctx:
    return Ctx({k: translate_type(v, target) for k, v in g.items()})


def translate_derivation(sd: SimpleDerivation) -> Derivation:
    """The node-by-node image of a simple derivation in the intersection system."""
    validate_simple(sd)
    return _tr(sd)


def _tr(sd: SimpleDerivation) -> Derivation:
    j = sd.judgement
    g, n = translate_ctx(j.basis, "D"), translate_ctx(j.names, "C")
    kids = [_tr(p) for p in sd.premises]
    match sd.rule:
        case "Ax":
            out = ax(g, j.subject.name, n)
        case "ImplI":
            out = abs_(j.subject.var, kids[0])
        case "ImplE":
            out = app(*kids)
        case "Mu1" | "Mu2":
            out = mu_(j.subject.name, j.subject.cmd.name, kids[0])
    want = Judgement(g, j.subject, translate_type(j.formula, "D"), n)
    if out.judgement != want:
        raise AssertionError(f"translation of {sd.rule} gave {out.judgement}, expected {want}")
    return out


__all__ = [
    "Formula", "FormulaSyntaxError", "Impl", "PropVar", "SimpleDerivation",
    "SimpleDerivationError", "SimpleJudgement", "check_simple", "format_simple_derivation",
    "parse_formula", "parse_simple_derivation", "print_formula", "translate_ctx",
    "translate_derivation", "translate_type", "validate_simple",
]
