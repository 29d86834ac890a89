"""Contexts, judgements, the typing rules as a derivation checker, weakening and strengthening."""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, replace

from .syntax import (
    Abs, App, Command, Mu, Term, Var,
    alpha_eq, bound_identifiers, free_occurrences, fresh, identifiers, parse_term,
    print_term, rename_free_name, rename_free_var,
)
from .types import (
    OMEGA, Arrow, ArrowOmega, InterC, InterD, Prod, ProdOmega, SubtypeCertificate, TypeSyntaxError,
    arrow, arrow_arg, check_certificate, format_certificate, parse_type, print_type,
    prod, read_certificate, sort_of, subtype,
)

log = logging.getLogger(__name__)

RULE_TAGS = ("Ax", "Abs", "App", "MuSame", "MuRename", "Leq", "Inter")


class Ctx(Mapping):
    """An immutable finite map from identifiers to types (a basis or a name context)."""

    __slots__ = ("_d", "_hash")

    def __init__(self, entries=()):
        self._d = dict(entries)
        self._hash = None

    def __getitem__(self, k):
        return self._d[k]

    def __iter__(self):
        return iter(self._d)

    def __len__(self):
        return len(self._d)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    def __eq__(self, other):
        if isinstance(other, Ctx):
            return self._d == other._d
        return NotImplemented

    def __repr__(self):
        return f"Ctx({self._d!r})"

    def set(self, k, v) -> "Ctx":
        d = dict(self._d)
        d[k] = v
        return Ctx(d)

    def without(self, *ks) -> "Ctx":
        return Ctx((k, v) for k, v in self._d.items() if k not in ks)

    def restrict(self, keys) -> "Ctx":
        return Ctx((k, v) for k, v in self._d.items() if k in keys)

    def rename(self, old, new) -> "Ctx":
        return Ctx((new if k == old else k, v) for k, v in self._d.items())


EMPTY = Ctx()


def ctx_inter(g1: Mapping, g2: Mapping) -> Ctx:
    out = dict(g1)
    for k, v in g2.items():
        if k in out and out[k] != v:
            out[k] = (InterD if sort_of(v) == "D" else InterC)(out[k], v)
        elif k not in out:
            out[k] = v
    return Ctx(out)


def ctx_leq(g1: Mapping, g2: Mapping) -> bool:
    """Every statement of ``g2`` is matched in ``g1`` by a smaller type."""
    return all(k in g1 and subtype(g1[k], v) is not None for k, v in g2.items())


def format_ctx(g: Mapping) -> str:
    return ", ".join(f"{k} : {print_type(g[k])}" for k in sorted(g))


@dataclass(frozen=True)
class Judgement:
    basis: Ctx
    subject: Term
    type: object
    names: Ctx = EMPTY

    def __str__(self):
        return format_judgement(self)


def format_judgement(j: Judgement) -> str:
    left = format_ctx(j.basis)
    right = format_ctx(j.names)
    return (f"{left + ' ' if left else ''}|- {print_term(j.subject)} : {print_type(j.type)}"
            f" |{' ' + right if right else ''}")


@dataclass(frozen=True)
class Derivation:
    rule: str
    judgement: Judgement
    premises: tuple["Derivation", ...] = ()
    cert: SubtypeCertificate | None = None

    @property
    def basis(self):
        return self.judgement.basis

    @property
    def subject(self):
        return self.judgement.subject

    @property
    def type(self):
        return self.judgement.type

    @property
    def names(self):
        return self.judgement.names

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)

    def nodes(self):
        stack = [self]
        while stack:
            d = stack.pop()
            yield d
            stack.extend(reversed(d.premises))

    def __str__(self):
        return format_derivation(self)


class DerivationError(ValueError):
    def __init__(self, node: Derivation, reason: str):
        super().__init__(f"{reason} at {node.rule} node {{{format_judgement(node.judgement)}}}")
        self.node = node
        self.reason = reason


# -- constructors ------------------------------------------------------------

def ax(basis, x: str, names=EMPTY) -> Derivation:
    return Derivation("Ax", Judgement(Ctx(basis), Var(x), basis[x], Ctx(names)))


def abs_(x: str, premise: Derivation) -> Derivation:
    j = premise.judgement
    conclusion = Arrow(prod(j.basis[x], arrow_arg(j.type)))
    return Derivation("Abs", Judgement(j.basis.without(x), Abs(x, j.subject), conclusion, j.names), (premise,))


def app(fun: Derivation, arg: Derivation) -> Derivation:
    j = fun.judgement
    k = arrow_arg(j.type)
    tail = OMEGA if isinstance(k, ProdOmega) else k.tail
    return Derivation("App", Judgement(j.basis, App(j.subject, arg.subject), arrow(tail), j.names), (fun, arg))


def mu_(a: str, b: str, premise: Derivation) -> Derivation:
    j = premise.judgement
    body = Mu(a, Command(b, j.subject))
    conclusion = Arrow(j.names[a])
    return Derivation("MuSame" if a == b else "MuRename",
                      Judgement(j.basis, body, conclusion, j.names.without(a)), (premise,))


def leq(d: Derivation, target) -> Derivation:
    """Subsume ``d`` to ``target``; consecutive Leq nodes are collapsed into one."""
    if d.type == target:
        return d
    inner = d
    cert = subtype(d.type, target)
    if cert is None:
        raise ValueError(f"{print_type(d.type)} is not below {print_type(target)}")
    if d.rule == "Leq":
        inner = d.premises[0]
        if inner.type == target:
            return inner
        cert = subtype(inner.type, target)
    return Derivation("Leq", replace(d.judgement, type=target), (inner,), cert)


def inter(d1: Derivation, d2: Derivation) -> Derivation:
    j = d1.judgement
    return Derivation("Inter", replace(j, type=InterD(d1.type, d2.type)), (d1, d2))


def inter_all_derivations(ds) -> Derivation:
    ds = list(ds)
    out = ds[0]
    for d in ds[1:]:
        out = inter(out, d)
    return out


# -- checking ----------------------------------------------------------------

def _fail(d, reason):
    raise DerivationError(d, reason)


def _check_node(d: Derivation):
    j = d.judgement
    m, t = j.subject, j.type
    if d.rule not in RULE_TAGS:
        _fail(d, f"unknown rule {d.rule}")
    try:
        if sort_of(t) != "D":
            _fail(d, "subject type is not a term type")
    except TypeError:
        _fail(d, "subject type is not a type")
    arity = {"Ax": 0, "Abs": 1, "App": 2, "MuSame": 1, "MuRename": 1, "Leq": 1, "Inter": 2}[d.rule]
    if len(d.premises) != arity:
        _fail(d, f"{d.rule} takes {arity} premises")
    ps = [p.judgement for p in d.premises]
    match d.rule:
        case "Ax":
            if not isinstance(m, Var):
                _fail(d, "Ax subject is not a variable")
            if j.basis.get(m.name) != t:
                _fail(d, f"{m.name} : {print_type(t)} is not in the basis")
        case "Abs":
            (p,) = ps
            if not isinstance(m, Abs):
                _fail(d, "Abs subject is not an abstraction")
            x = m.var
            if x in j.basis:
                _fail(d, f"bound variable {x} occurs in the basis")
            if x not in p.basis:
                _fail(d, f"premise basis lacks the bound variable {x}")
            if p.basis.without(x) != j.basis or p.names != j.names or p.subject != m.body:
                _fail(d, "premise does not match the conclusion")
            if not isinstance(p.type, (Arrow, ArrowOmega)):
                _fail(d, "premise type is not an arrow")
            if t != Arrow(prod(p.basis[x], arrow_arg(p.type))):
                _fail(d, "conclusion type is not the product of the premise")
        case "App":
            f, a = ps
            if not isinstance(m, App):
                _fail(d, "App subject is not an application")
            for p in ps:
                if p.basis != j.basis or p.names != j.names:
                    _fail(d, "premise contexts differ from the conclusion")
            if f.subject != m.fun or a.subject != m.arg:
                _fail(d, "premise subjects do not match the application")
            if not isinstance(f.type, Arrow):
                _fail(d, "function type is not a product arrow")
            k = f.type.arg
            if not isinstance(k, (ProdOmega, Prod)):
                _fail(d, "function type is not a product arrow")
            tail = OMEGA if isinstance(k, ProdOmega) else k.tail
            if a.type != k.head:
                _fail(d, "argument type does not match the product head")
            if t != arrow(tail):
                _fail(d, "conclusion type is not the product tail arrow")
        case "MuSame" | "MuRename":
            (p,) = ps
            if not isinstance(m, Mu):
                _fail(d, "subject is not a mu-abstraction")
            a, b = m.name, m.cmd.name
            if (a == b) != (d.rule == "MuSame"):
                _fail(d, f"{d.rule} does not match the command name")
            if a in j.names:
                _fail(d, f"bound name {a} occurs in the name context")
            if a not in p.names:
                _fail(d, f"premise name context lacks {a}")
            if p.basis != j.basis or p.subject != m.cmd.body:
                _fail(d, "premise does not match the conclusion")
            if p.names.without(a) != j.names:
                _fail(d, "premise name context does not match the conclusion")
            if t != Arrow(p.names[a]):
                _fail(d, f"conclusion type is not the type of {a}")
            target = p.names[a] if a == b else j.names.get(b)
            if target is None:
                _fail(d, f"premise name context lacks {b}")
            if p.type != Arrow(target):
                _fail(d, f"premise type does not match the type of {b}")
        case "Leq":
            (p,) = ps
            if p.basis != j.basis or p.names != j.names or p.subject != m:
                _fail(d, "Leq changes more than the type")
            c = d.cert
            if c is None or c.lhs != p.type or c.rhs != t:
                _fail(d, "certificate does not relate the premise and conclusion types")
            res = check_certificate(c)
            if not res:
                _fail(d, f"invalid certificate: {res.reason} at {format_certificate(res.node)}")
        case "Inter":
            p1, p2 = ps
            for p in ps:
                if p.basis != j.basis or p.names != j.names or p.subject != m:
                    _fail(d, "Inter premises differ from the conclusion")
            if t != InterD(p1.type, p2.type):
                _fail(d, "conclusion is not the intersection of the premises")


def check_derivation(d: Derivation, renamings: list | None = None) -> Judgement:
    """Validate every node; returns the root judgement or raises DerivationError.

    Bound identifiers that collide with context domains are renamed first; the
    renamings are logged and appended to ``renamings`` when given.
    """
    d, done = repair_convention(d)
    for r in done:
        log.info("renamed bound identifier %s to %s", *r)
    if renamings is not None:
        renamings.extend(done)
    seen: set[int] = set()
    for node in d.nodes():
        if id(node) in seen:
            continue
        seen.add(id(node))
        _check_node(node)
    return d.judgement


# -- renaming inside derivations ---------------------------------------------

def rename_var_in(d: Derivation, x: str, z: str) -> Derivation:
    """Rename the free variable ``x`` to ``z`` in subjects and bases, stopping under binders of ``x``."""
    j = d.judgement
    new_j = replace(j, basis=j.basis.rename(x, z), subject=rename_free_var(j.subject, x, z))
    if d.rule == "Abs" and j.subject.var == x:
        outer = new_j.basis.get(z)
        premise = d.premises[0]
        if outer is not None:
            premise = extend(premise, Ctx({z: outer}), EMPTY)
        return replace(d, judgement=new_j, premises=(premise,))
    return replace(d, judgement=new_j, premises=tuple(rename_var_in(p, x, z) for p in d.premises))


def rename_name_in(d: Derivation, a: str, c: str) -> Derivation:
    j = d.judgement
    new_j = replace(j, names=j.names.rename(a, c), subject=rename_free_name(j.subject, a, c))
    if d.rule in ("MuSame", "MuRename") and j.subject.name == a:
        outer = new_j.names.get(c)
        premise = d.premises[0]
        if outer is not None:
            premise = extend(premise, EMPTY, Ctx({c: outer}))
        return replace(d, judgement=new_j, premises=(premise,))
    return replace(d, judgement=new_j, premises=tuple(rename_name_in(p, a, c) for p in d.premises))


def extend(d: Derivation, g: Mapping, n: Mapping) -> Derivation:
    """Add statements for identifiers not otherwise mentioned (no subsumption needed)."""
    j = d.judgement
    new_j = replace(j, basis=Ctx({**g, **j.basis}), names=Ctx({**n, **j.names}))
    return replace(d, judgement=new_j, premises=tuple(extend(p, g, n) for p in d.premises))


def _rebuild_subject(d: Derivation, premises) -> Term:
    m = d.subject
    match d.rule:
        case "Abs":
            return Abs(m.var, premises[0].subject)
        case "App":
            return App(premises[0].subject, premises[1].subject)
        case "MuSame" | "MuRename":
            return Mu(m.name, Command(m.cmd.name, premises[0].subject))
        case "Leq" | "Inter":
            return premises[0].subject
    return m


def repair_convention(d: Derivation) -> tuple[Derivation, list]:
    """Alpha-rename binders that collide with their context domains."""
    done: list = []

    def go(d):
        j = d.judgement
        m = j.subject
        avoid = identifiers(m) | set(j.basis) | set(j.names)
        if d.rule == "Abs" and isinstance(m, Abs) and m.var in j.basis:
            z = fresh(m.var, avoid | _all_keys(d))
            premise = rename_var_in(d.premises[0], m.var, z)
            premise = extend(premise, Ctx({m.var: j.basis[m.var]}), EMPTY)
            done.append((m.var, z))
            d = replace(d, premises=(premise,), judgement=replace(j, subject=Abs(z, premise.subject)))
        elif d.rule in ("MuSame", "MuRename") and isinstance(m, Mu) and m.name in j.names:
            c = fresh(m.name, avoid | _all_keys(d))
            premise = rename_name_in(d.premises[0], m.name, c)
            premise = extend(premise, EMPTY, Ctx({m.name: j.names[m.name]}))
            done.append((m.name, c))
            target = c if m.cmd.name == m.name else m.cmd.name
            d = replace(d, premises=(premise,),
                        judgement=replace(j, subject=Mu(c, Command(target, premise.subject))))
        premises = tuple(go(p) for p in d.premises)
        if premises == d.premises:
            return d
        subject = _rebuild_subject(d, premises)
        return replace(d, judgement=replace(d.judgement, subject=subject), premises=premises)

    return go(d), done


def _all_keys(d: Derivation) -> set:
    out: set = set()
    for n in d.nodes():
        out |= set(n.basis) | set(n.names) | identifiers(n.subject)
    return out


# -- weakening and strengthening ---------------------------------------------

def weaken(d: Derivation, g: Mapping, n: Mapping) -> Derivation:
    """A derivation of ``g |- M : delta | n`` from one of ``Gamma |- M : delta | Delta``."""
    g, n = Ctx(g), Ctx(n)
    if not ctx_leq(g, d.basis) or not ctx_leq(n, d.names):
        raise ValueError("weakening needs contexts below the derivation's contexts")
    bv, bn = bound_identifiers(d.subject)
    clash = (bv & set(g)) | (bn & set(n))
    if clash:
        raise ValueError(f"context mentions bound identifiers {sorted(clash)}")
    return _weaken(d, g, n)


def _weaken(d: Derivation, g: Ctx, n: Ctx) -> Derivation:
    j = d.judgement
    m = j.subject
    match d.rule:
        case "Ax":
            new = Derivation("Ax", Judgement(g, m, g[m.name], n))
            return leq(new, j.type)
        case "Abs":
            x = m.var
            p = _weaken(d.premises[0], g.set(x, d.premises[0].basis[x]), n)
            return Derivation("Abs", Judgement(g, m, j.type, n), (p,))
        case "App" | "Inter":
            ps = tuple(_weaken(p, g, n) for p in d.premises)
            return Derivation(d.rule, Judgement(g, m, j.type, n), ps)
        case "MuSame":
            a = m.name
            p = _weaken(d.premises[0], g, n.set(a, d.premises[0].names[a]))
            return Derivation("MuSame", Judgement(g, m, j.type, n), (p,))
        case "MuRename":
            a, b = m.name, m.cmd.name
            p = _weaken(d.premises[0], g, n.set(a, d.premises[0].names[a]))
            p = leq(p, Arrow(n[b]))
            return Derivation("MuRename", Judgement(g, m, j.type, n), (p,))
        case "Leq":
            p = _weaken(d.premises[0], g, n)
            return leq(p, j.type)
    raise DerivationError(d, f"unknown rule {d.rule}")


def strengthen(d: Derivation) -> Derivation:
    """Restrict every context to the identifiers the subject actually needs."""
    fv, fn = free_occurrences(d.subject)
    return _restrict(d, set(fv), set(fn))


def _restrict(d: Derivation, vs: set, ns: set) -> Derivation:
    j = d.judgement
    m = j.subject
    new_j = replace(j, basis=j.basis.restrict(vs), names=j.names.restrict(ns))
    match d.rule:
        case "Abs":
            ps = (_restrict(d.premises[0], vs | {m.var}, ns),)
        case "MuSame" | "MuRename":
            ps = (_restrict(d.premises[0], vs, ns | {m.name, m.cmd.name}),)
        case _:
            ps = tuple(_restrict(p, vs, ns) for p in d.premises)
    return replace(d, judgement=new_j, premises=ps)


# -- alpha transport ---------------------------------------------------------

def transport(d: Derivation, target: Term) -> Derivation:
    """Rename the bound identifiers of ``d`` so that its subject is exactly ``target``."""
    if not alpha_eq(d.subject, target):
        raise ValueError("transport needs alpha-equal subjects")
    avoid = _all_keys(d) | identifiers(target)

    def freshen(d):
        m = d.subject
        ps = tuple(freshen(p) for p in d.premises)
        d = replace(d, premises=ps, judgement=replace(d.judgement, subject=_rebuild_subject(d, ps)))
        if d.rule == "Abs":
            z = fresh("v", avoid)
            avoid.add(z)
            p = rename_var_in(d.premises[0], m.var, z)
            return replace(d, premises=(p,), judgement=replace(d.judgement, subject=Abs(z, p.subject)))
        if d.rule in ("MuSame", "MuRename"):
            c = fresh("k", avoid)
            avoid.add(c)
            p = rename_name_in(d.premises[0], m.name, c)
            cmd = p.subject
            name = c if d.rule == "MuSame" else m.cmd.name
            return replace(d, premises=(p,), judgement=replace(d.judgement, subject=Mu(c, Command(name, cmd))))
        return d

    def align(d, t):
        match d.rule:
            case "Abs":
                p = rename_var_in(d.premises[0], d.subject.var, t.var)
                p = align(p, t.body)
                return replace(d, premises=(p,), judgement=replace(d.judgement, subject=t))
            case "MuSame" | "MuRename":
                p = rename_name_in(d.premises[0], d.subject.name, t.name)
                p = align(p, t.cmd.body)
                return replace(d, premises=(p,), judgement=replace(d.judgement, subject=t))
            case "App":
                f = align(d.premises[0], t.fun)
                a = align(d.premises[1], t.arg)
                return replace(d, premises=(f, a), judgement=replace(d.judgement, subject=t))
            case "Leq" | "Inter":
                ps = tuple(align(p, t) for p in d.premises)
                return replace(d, premises=ps, judgement=replace(d.judgement, subject=t))
        return d

    return align(freshen(d), target)


# -- text format -------------------------------------------------------------

def format_derivation(d: Derivation, indent: int = 0) -> str:
    pad = "  " * indent
    head = f"{pad}({d.rule} {{{format_judgement(d.judgement)}}}"
    if d.cert is not None:
        head += f" {format_certificate(d.cert)}"
    if not d.premises:
        return head + ")"
    kids = "\n".join(format_derivation(p, indent + 1) for p in d.premises)
    return f"{head}\n{kids})"


class DerivationSyntaxError(ValueError):
    pass


def _parse_ctx(text: str, sort: str) -> Ctx:
    out = {}
    text = text.strip()
    if not text:
        return EMPTY
    for entry in text.split(","):
        name, sep, ty = entry.partition(":")
        name = name.strip()
        if not sep or not name.isidentifier():
            raise DerivationSyntaxError(f"malformed context entry {entry.strip()!r}")
        if name in out:
            raise DerivationSyntaxError(f"duplicate context entry for {name}")
        out[name] = parse_type(ty, sort)
    return Ctx(out)


def parse_judgement(text: str) -> Judgement:
    left, sep, rest = text.partition("|-")
    if not sep:
        raise DerivationSyntaxError(f"judgement without '|-': {text!r}")
    typed, bar, right = rest.rpartition("|")
    if not bar:
        raise DerivationSyntaxError(f"judgement without name context bar: {text!r}")
    subj, colon, ty = typed.partition(":")
    if not colon:
        raise DerivationSyntaxError(f"judgement without ':': {text!r}")
    try:
        return Judgement(_parse_ctx(left, "D"), parse_term(subj.strip()), parse_type(ty, "D"),
                         _parse_ctx(right, "C"))
    except (TypeSyntaxError, TypeError, ValueError) as exc:
        raise DerivationSyntaxError(f"in judgement {text.strip()!r}: {exc}") from None


def parse_derivation(text: str) -> Derivation:
    d, pos = _read(text, 0)
    if text[pos:].strip():
        raise DerivationSyntaxError(f"trailing input at offset {pos}")
    return d


def _skip(text, pos):
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos


def _read(text: str, pos: int):
    pos = _skip(text, pos)
    if text[pos:pos + 1] != "(":
        raise DerivationSyntaxError(f"expected '(' at offset {pos}")
    pos = _skip(text, pos + 1)
    start = pos
    while pos < len(text) and text[pos].isalpha():
        pos += 1
    rule = text[start:pos]
    if rule not in RULE_TAGS:
        raise DerivationSyntaxError(f"unknown rule tag {rule!r} at offset {start}")
    pos = _skip(text, pos)
    if text[pos:pos + 1] != "{":
        raise DerivationSyntaxError(f"expected '{{' at offset {pos}")
    close = text.find("}", pos)
    if close < 0:
        raise DerivationSyntaxError("unterminated judgement")
    judgement = parse_judgement(text[pos + 1:close])
    pos = _skip(text, close + 1)
    cert = None
    if rule == "Leq":
        try:
            cert, pos = read_certificate(text, pos)
        except (TypeSyntaxError, TypeError, ValueError) as exc:
            raise DerivationSyntaxError(f"bad certificate: {exc}") from None
        pos = _skip(text, pos)
    kids = []
    while text[pos:pos + 1] == "(":
        kid, pos = _read(text, pos)
        kids.append(kid)
        pos = _skip(text, pos)
    if text[pos:pos + 1] != ")":
        raise DerivationSyntaxError(f"expected ')' at offset {pos}")
    return Derivation(rule, judgement, tuple(kids), cert), pos + 1
