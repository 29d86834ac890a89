"""Term types and continuation-stack types, their preorders, and subtyping certificates.

Term types (sort D)::

    delta ::= nu | om -> nu | kappa -> nu | delta & delta

Continuation-stack types (sort C)::

    kappa ::= delta * om | delta * kappa | kappa & kappa

``om`` is never a type by itself: it only marks an arrow taking no stack
information, or terminates a product.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Union


class TypeSyntaxError(ValueError):
    pass


class SortError(TypeError):
    pass


@dataclass(frozen=True, slots=True)
class Nu:
    pass


@dataclass(frozen=True, slots=True)
class ArrowOmega:
    pass


@dataclass(frozen=True, slots=True)
class Arrow:
    arg: "ContType"


@dataclass(frozen=True, slots=True)
class InterD:
    left: "TermType"
    right: "TermType"


@dataclass(frozen=True, slots=True)
class ProdOmega:
    head: "TermType"


@dataclass(frozen=True, slots=True)
class Prod:
    head: "TermType"
    tail: "ContType"


@dataclass(frozen=True, slots=True)
class InterC:
    left: "ContType"
    right: "ContType"


class _Omega:
    """The argument marker of ``om -> nu`` and of the footnoted (abs)/(app) instances."""

    __slots__ = ()

    def __repr__(self):
        return "OMEGA"

    def __reduce__(self):
        return (_omega, ())


def _omega():
    return OMEGA


OMEGA = _Omega()
NU = Nu()
ARROW_OMEGA = ArrowOmega()

TermType = Union[Nu, ArrowOmega, Arrow, InterD]
ContType = Union[ProdOmega, Prod, InterC]
Type = Union[TermType, ContType]
ArgType = Union[_Omega, ContType]

D_TYPES = (Nu, ArrowOmega, Arrow, InterD)
C_TYPES = (ProdOmega, Prod, InterC)


def sort_of(t) -> str:
    if isinstance(t, D_TYPES):
        return "D"
    if isinstance(t, C_TYPES):
        return "C"
    raise SortError(f"not a type: {t!r}")


def arrow(kappa: ArgType) -> TermType:
    """``kappa -> nu``, with ``om -> nu`` when ``kappa`` is the omega marker."""
    return ARROW_OMEGA if kappa is OMEGA else Arrow(kappa)


def arrow_arg(delta: TermType) -> ArgType:
    if isinstance(delta, ArrowOmega):
        return OMEGA
    if isinstance(delta, Arrow):
        return delta.arg
    raise SortError(f"{print_type(delta)} is not an arrow")


def is_arrow(delta) -> bool:
    return isinstance(delta, (Arrow, ArrowOmega))


def prod(delta: TermType, kappa: ArgType) -> ContType:
    """``delta * kappa``, with ``delta * om`` when ``kappa`` is the omega marker."""
    return ProdOmega(delta) if kappa is OMEGA else Prod(delta, kappa)


def inter_all(types):
    """Left-nested intersection of a non-empty sequence."""
    types = list(types)
    out = types[0]
    mk = InterD if sort_of(out) == "D" else InterC
    for t in types[1:]:
        out = mk(out, t)
    return out


def components(t) -> list:
    """Leaves of the top-level intersection tree, left to right."""
    if isinstance(t, (InterD, InterC)):
        return components(t.left) + components(t.right)
    return [t]


def type_size(t) -> int:
    match t:
        case Nu() | ArrowOmega():
            return 1
        case Arrow(k):
            return 1 + type_size(k)
        case ProdOmega(d):
            return 1 + type_size(d)
        case Prod(d, k):
            return 1 + type_size(d) + type_size(k)
        case InterD(a, b) | InterC(a, b):
            return 1 + type_size(a) + type_size(b)
    raise SortError(t)


def length_c(k: ContType) -> int:
    """Minimal length of the stacks a continuation type describes."""
    match k:
        case ProdOmega():
            return 1
        case Prod(_, tail):
            return 1 + length_c(tail)
        case InterC(a, b):
            return max(length_c(a), length_c(b))
    raise SortError(f"length is defined on stack types only: {k!r}")


# -- printing and parsing ----------------------------------------------------

def print_type(t) -> str:
    match t:
        case Nu():
            return "nu"
        case ArrowOmega():
            return "om -> nu"
        case Arrow(k):
            inner = print_type(k)
            return f"({inner}) -> nu" if isinstance(k, InterC) else f"{inner} -> nu"
        case InterD(a, b) | InterC(a, b):
            right = print_type(b)
            if isinstance(b, (InterD, InterC)):
                right = f"({right})"
            return f"{print_type(a)} & {right}"
        case ProdOmega(d):
            head, sep = _head(d)
            return f"{head}{sep}om"
        case Prod(d, k):
            head, sep = _head(d)
            tail = print_type(k)
            if isinstance(k, InterC):
                tail = f"({tail})"
            return f"{head}{sep}{tail}"
    if t is OMEGA:
        return "om"
    raise SortError(t)


def _head(d):
    if isinstance(d, Nu):
        return "nu", "*"
    return f"({print_type(d)})", " * "


_TYPE_TOKEN = re.compile(r"\s*(nu|om|->|\*|&|\(|\))")


def _type_tokens(text):
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TYPE_TOKEN.match(text, pos)
        if not m:
            raise TypeSyntaxError(f"unexpected input at column {pos + 1}: {text[pos:pos + 10]!r}")
        out.append((m.group(1), m.start(1) + 1))
        pos = m.end()
    out.append(("", len(text) + 1))
    return out


class _TypeParser:
    # raw trees: "nu" | "om" | ("->", lhs) | ("*", head, tail) | ("&", l, r)

    def __init__(self, text):
        self.toks = _type_tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i][0]

    def expect(self, tok):
        got, col = self.toks[self.i]
        if got != tok:
            raise TypeSyntaxError(f"expected {tok!r} at column {col}, got {got or 'end of input'!r}")
        self.i += 1

    def inter(self):
        t = self.arrowlevel()
        while self.peek() == "&":
            self.i += 1
            t = ("&", t, self.arrowlevel())
        return t

    def arrowlevel(self):
        t = self.prodlevel()
        if self.peek() == "->":
            self.i += 1
            self.expect("nu")
            t = ("->", t)
            if self.peek() == "->":
                raise TypeSyntaxError("arrow results are always nu")
        return t

    def prodlevel(self):
        t = self.primary()
        if self.peek() == "*":
            self.i += 1
            t = ("*", t, self.prodlevel())
        return t

    def primary(self):
        tok, col = self.toks[self.i]
        if tok in ("nu", "om"):
            self.i += 1
            return tok
        if tok == "(":
            self.i += 1
            t = self.inter()
            self.expect(")")
            return t
        raise TypeSyntaxError(f"unexpected {tok or 'end of input'!r} at column {col}")


def _to_d(raw):
    if raw == "nu":
        return NU
    if raw == "om":
        raise SortError("om is not a proper type")
    if raw[0] == "->":
        return ARROW_OMEGA if raw[1] == "om" else Arrow(_to_c(raw[1]))
    if raw[0] == "&":
        return InterD(_to_d(raw[1]), _to_d(raw[2]))
    raise SortError("expected a term type, found a product")


def _to_c(raw):
    if raw == "om":
        raise SortError("om is not a proper type")
    if raw == "nu" or raw[0] == "->":
        raise SortError("expected a stack type, found a term type")
    if raw[0] == "*":
        head = _to_d(raw[1])
        return ProdOmega(head) if raw[2] == "om" else Prod(head, _to_c(raw[2]))
    return InterC(_to_c(raw[1]), _to_c(raw[2]))


def _raw_sort(raw):
    if raw in ("nu",) or raw[0] == "->":
        return "D"
    if raw == "om":
        raise SortError("om is not a proper type")
    if raw[0] == "*":
        return "C"
    return _raw_sort(raw[1])


def parse_type(text: str, sort: str | None = None) -> Type:
    p = _TypeParser(text)
    raw = p.inter()
    if p.peek() != "":
        raise TypeSyntaxError(f"unexpected {p.peek()!r} at column {p.toks[p.i][1]}")
    sort = sort or _raw_sort(raw)
    return _to_d(raw) if sort.upper() == "D" else _to_c(raw)


# -- canonical forms and the fast decision procedure -------------------------
#
# CanonD: frozenset of arrow arguments (OMEGA or CanonC), an antichain.
# CanonC: (prefix, finals) for chains d1 * ... * d(L-1) * (s1*om & s2*om & ...):
# the last positions of equally long chains never merge, every other position does.

@lru_cache(maxsize=None)
def canon_d(t: TermType):
    match t:
        case Nu() | ArrowOmega():
            return frozenset([OMEGA])
        case Arrow(k):
            return frozenset([canon_c(k)])
        case InterD(a, b):
            return _min_arrows(canon_d(a) | canon_d(b))
    raise SortError(t)


@lru_cache(maxsize=None)
def canon_c(k: ContType):
    match k:
        case ProdOmega(d):
            return ((), frozenset([canon_d(d)]))
        case Prod(d, tail):
            prefix, finals = canon_c(tail)
            return ((canon_d(d),) + prefix, finals)
        case InterC(a, b):
            return _merge(canon_c(a), canon_c(b))
    raise SortError(k)


def _merge(c1, c2):
    (p1, f1), (p2, f2) = c1, c2
    if len(p1) > len(p2):
        (p1, f1), (p2, f2) = (p2, f2), (p1, f1)
    if len(p1) == len(p2):
        prefix = tuple(_min_arrows(a | b) for a, b in zip(p1, p2))
        return (prefix, _min_finals(f1 | f2))
    n = len(p1)
    merged_last = frozenset().union(*f1)
    prefix = tuple(_min_arrows(a | b) for a, b in zip(p1, p2[:n]))
    prefix += (_min_arrows(p2[n] | merged_last),) + p2[n + 1:]
    return (prefix, f2)


def _arrow_leq(x, y) -> bool:
    if x is OMEGA or y is OMEGA:
        return x is y
    return canon_leq_c(y, x)


def _min_arrows(arrows):
    arrows = list(arrows)
    keep = [a for a in arrows if not any(b != a and _arrow_leq(b, a) for b in arrows)]
    return frozenset(keep)


def _min_finals(finals):
    finals = list(finals)
    keep = [s for s in finals if not any(r != s and canon_leq_d(r, s) for r in finals)]
    return frozenset(keep)


@lru_cache(maxsize=None)
def canon_leq_d(a, b) -> bool:
    return all(any(_arrow_leq(x, y) for x in a) for y in b)


@lru_cache(maxsize=None)
def canon_leq_c(c, c2) -> bool:
    (p, f), (q, g) = c, c2
    if len(p) < len(q):
        return False
    if not all(canon_leq_d(x, y) for x, y in zip(p, q)):
        return False
    if len(p) > len(q):
        return all(canon_leq_d(p[len(q)], s) for s in g)
    return all(any(canon_leq_d(r, s) for r in f) for s in g)


def leq(s, t) -> bool:
    """Fast decision of ``s <= t`` on canonical forms (no certificate)."""
    srt = sort_of(s)
    if sort_of(t) != srt:
        raise SortError("subtyping compares types of the same sort")
    if srt == "D":
        return canon_leq_d(canon_d(s), canon_d(t))
    return canon_leq_c(canon_c(s), canon_c(t))


def canonicalize(t) -> Type:
    """A representative type of the canonical form of ``t`` (same =_A class)."""
    if sort_of(t) == "D":
        return _render_d(canon_d(t))
    return _render_c(canon_c(t))


def _render_d(cd):
    parts = sorted((NU if x is OMEGA else Arrow(_render_c(x)) for x in cd), key=print_type)
    return inter_all(parts)


def _render_c(cc):
    prefix, finals = cc
    finals_t = sorted((ProdOmega(_render_d(s)) for s in finals), key=print_type)
    out = inter_all(finals_t)
    for d in reversed(prefix):
        out = Prod(_render_d(d), out)
    return out


def type_eq(s, t, sort: str | None = None) -> bool:
    if sort is not None:
        _check_sort(s, sort)
        _check_sort(t, sort)
    return leq(s, t) and leq(t, s)


def _check_sort(t, sort):
    if sort_of(t) != sort.upper():
        raise SortError(f"{print_type(t)} is not of sort {sort.upper()}")


# -- certificates ------------------------------------------------------------

RULES = (
    "refl", "trans", "proj-l", "proj-r", "nu-om", "om-nu", "trunc",
    "dist-om", "dist", "cov-om", "cov", "glb", "contra",
)


@dataclass(frozen=True)
class SubtypeCertificate:
    lhs: Type
    rhs: Type
    rule: str
    children: tuple["SubtypeCertificate", ...] = ()

    def __str__(self):
        return format_certificate(self)

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)


def format_certificate(c: SubtypeCertificate) -> str:
    inner = " ".join(format_certificate(k) for k in c.children)
    pair = f"[{print_type(c.lhs)} <= {print_type(c.rhs)}]"
    return f"({c.rule} {pair}{' ' + inner if inner else ''})"


@dataclass(frozen=True)
class CertCheck:
    ok: bool
    node: SubtypeCertificate | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def _local_ok(c: SubtypeCertificate) -> str | None:
    """Reason the node is not an instance of its rule, or None."""
    lhs, rhs, kids = c.lhs, c.rhs, c.children
    try:
        srt = sort_of(lhs)
        if sort_of(rhs) != srt:
            return "sides of different sorts"
    except SortError as e:
        return str(e)
    arity = {"trans": 2, "cov-om": 1, "cov": 2, "glb": 2, "contra": 1}.get(c.rule, 0)
    if c.rule not in RULES:
        return f"unknown rule {c.rule}"
    if len(kids) != arity:
        return f"{c.rule} takes {arity} premises"
    inter = InterD if srt == "D" else InterC
    match c.rule:
        case "refl":
            ok = lhs == rhs
        case "trans":
            ok = kids[0].lhs == lhs and kids[1].rhs == rhs and kids[0].rhs == kids[1].lhs
        case "proj-l":
            ok = isinstance(lhs, inter) and lhs.left == rhs
        case "proj-r":
            ok = isinstance(lhs, inter) and lhs.right == rhs
        case "nu-om":
            ok = lhs == NU and rhs == ARROW_OMEGA
        case "om-nu":
            ok = lhs == ARROW_OMEGA and rhs == NU
        case "trunc":
            ok = (isinstance(lhs, Prod) and isinstance(lhs.tail, ProdOmega)
                  and rhs == ProdOmega(lhs.head))
        case "dist-om":
            ok = (isinstance(lhs, InterC) and isinstance(lhs.left, ProdOmega)
                  and isinstance(lhs.right, Prod)
                  and rhs == Prod(InterD(lhs.left.head, lhs.right.head), lhs.right.tail))
        case "dist":
            ok = (isinstance(lhs, InterC) and isinstance(lhs.left, Prod)
                  and isinstance(lhs.right, Prod)
                  and rhs == Prod(InterD(lhs.left.head, lhs.right.head),
                                  InterC(lhs.left.tail, lhs.right.tail)))
        case "cov-om":
            ok = (isinstance(lhs, ProdOmega) and isinstance(rhs, ProdOmega)
                  and kids[0].lhs == lhs.head and kids[0].rhs == rhs.head)
        case "cov":
            ok = (isinstance(lhs, Prod) and isinstance(rhs, Prod)
                  and kids[0].lhs == lhs.head and kids[0].rhs == rhs.head
                  and kids[1].lhs == lhs.tail and kids[1].rhs == rhs.tail)
        case "glb":
            ok = (isinstance(rhs, inter) and kids[0].lhs == lhs and kids[1].lhs == lhs
                  and kids[0].rhs == rhs.left and kids[1].rhs == rhs.right)
        case "contra":
            ok = (isinstance(lhs, Arrow) and isinstance(rhs, Arrow)
                  and kids[0].lhs == rhs.arg and kids[0].rhs == lhs.arg)
    return None if ok else f"not an instance of {c.rule}"


def check_certificate(c: SubtypeCertificate) -> CertCheck:
    seen: set[int] = set()
    stack = [c]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        reason = _local_ok(node)
        if reason:
            return CertCheck(False, node, reason)
        stack.extend(node.children)
    return CertCheck(True)


# certificate construction

def _refl(t):
    return SubtypeCertificate(t, t, "refl")


def _trans(a: SubtypeCertificate, b: SubtypeCertificate):
    if a.rule == "refl":
        return b
    if b.rule == "refl":
        return a
    return SubtypeCertificate(a.lhs, b.rhs, "trans", (a, b))


def _chain(*certs):
    out = certs[0]
    for c in certs[1:]:
        out = _trans(out, c)
    return out


def _proj(t, side):
    return SubtypeCertificate(t, t.left if side == "l" else t.right, f"proj-{side}")


def _glb(a, b):
    mk = InterD if sort_of(a.lhs) == "D" else InterC
    return SubtypeCertificate(a.lhs, mk(a.rhs, b.rhs), "glb", (a, b))


def _inter_mono(lhs, c1, c2):
    """``l & r <= l' & r'`` from ``l <= l'`` and ``r <= r'``."""
    if c1.rule == "refl" and c2.rule == "refl":
        return _refl(lhs)
    return _glb(_trans(_proj(lhs, "l"), c1), _trans(_proj(lhs, "r"), c2))


def _cov(head_cert, tail_cert):
    if head_cert.rule == "refl" and tail_cert.rule == "refl":
        return _refl(Prod(head_cert.lhs, tail_cert.lhs))
    return SubtypeCertificate(Prod(head_cert.lhs, tail_cert.lhs),
                              Prod(head_cert.rhs, tail_cert.rhs), "cov", (head_cert, tail_cert))


def _cov_om(head_cert):
    if head_cert.rule == "refl":
        return _refl(ProdOmega(head_cert.lhs))
    return SubtypeCertificate(ProdOmega(head_cert.lhs), ProdOmega(head_cert.rhs), "cov-om", (head_cert,))


def _is_final_block(k):
    return isinstance(k, ProdOmega) or isinstance(k, InterC)


@lru_cache(maxsize=None)
def _norm(k):
    """``(N, k <= N)`` with ``N`` in chain form: products over a block of ``d * om`` leaves."""
    match k:
        case ProdOmega():
            return k, _refl(k)
        case Prod(d, tail):
            n, c = _norm(tail)
            return Prod(d, n), _cov(_refl(d), c)
        case InterC(a, b):
            na, ca = _norm(a)
            nb, cb = _norm(b)
            mono = _inter_mono(k, ca, cb)
            n, cm = _merge_chains(na, nb)
            return n, _trans(mono, cm)
    raise SortError(k)


def _merge_chains(a, b):
    lhs = InterC(a, b)
    if _is_final_block(a) and _is_final_block(b):
        return lhs, _refl(lhs)
    if _is_final_block(a):
        return _merge_final(a, b)
    if _is_final_block(b):
        swap = _glb(_proj(lhs, "r"), _proj(lhs, "l"))
        n, c = _merge_final(b, a)
        return n, _trans(swap, c)
    dist_rhs = Prod(InterD(a.head, b.head), InterC(a.tail, b.tail))
    dist = SubtypeCertificate(lhs, dist_rhs, "dist")
    nt, ct = _merge_chains(a.tail, b.tail)
    return Prod(dist_rhs.head, nt), _trans(dist, _cov(_refl(dist_rhs.head), ct))


def _merge_final(f, b):
    """Fold a block of ``d * om`` leaves into the product chain ``b``."""
    lhs = InterC(f, b)
    if isinstance(f, ProdOmega):
        rhs = Prod(InterD(f.head, b.head), b.tail)
        return rhs, SubtypeCertificate(lhs, rhs, "dist-om")
    f1, f2 = f.left, f.right
    # (f1 & f2) & b <= f1 & (f2 & b)
    inner = InterC(f2, b)
    left_part = _trans(_proj(lhs, "l"), _proj(f, "l"))
    right_part = _glb(_trans(_proj(lhs, "l"), _proj(f, "r")), _proj(lhs, "r"))
    assoc = _glb(left_part, right_part)
    n2, c2 = _merge_final(f2, b)
    mid = InterC(f1, inner)
    step = _inter_mono(mid, _refl(f1), c2)
    n, c = _merge_final(f1, n2)
    return n, _chain(assoc, step, c)


def _leaf_paths(block, path=()):
    if isinstance(block, ProdOmega):
        yield block, path
    else:
        yield from _leaf_paths(block.left, path + ("l",))
        yield from _leaf_paths(block.right, path + ("r",))


def _project_path(block, path):
    cert = _refl(block)
    cur = block
    for side in path:
        p = _proj(cur, side)
        cert = _trans(cert, p)
        cur = p.rhs
    return cert


def _trunc1(k):
    """``k <= h * om`` for a chain-form ``k``; returns ``(h, certificate)``."""
    if _is_final_block(k):
        leaf, path = next(_leaf_paths(k))
        return leaf.head, _project_path(k, path)
    h, c = _trunc1(k.tail)
    widened = _cov(_refl(k.head), c)
    trunc = SubtypeCertificate(Prod(k.head, ProdOmega(h)), ProdOmega(k.head), "trunc")
    return k.head, _trans(widened, trunc)


def _compare(n, t):
    """Certificate for chain-form ``n <= t`` where ``t`` is a product, or None."""
    if isinstance(t, ProdOmega):
        if _is_final_block(n):
            for leaf, path in _leaf_paths(n):
                c = _prove_d(leaf.head, t.head)
                if c is not None:
                    return _trans(_project_path(n, path), _cov_om(c))
            return None
        c = _prove_d(n.head, t.head)
        if c is None:
            return None
        return _trans(_trunc1(n)[1], _cov_om(c))
    if _is_final_block(n):
        return None
    ch = _prove_d(n.head, t.head)
    if ch is None:
        return None
    ct = _prove_c(n.tail, t.tail)
    if ct is None:
        return None
    return _cov(ch, ct)


@lru_cache(maxsize=None)
def _prove_c(s, t):
    if isinstance(t, InterC):
        a = _prove_c(s, t.left)
        b = a and _prove_c(s, t.right)
        return _glb(a, b) if b else None
    if s == t:
        return _refl(s)
    n, c = _norm(s)
    cmp = _compare(n, t)
    return _trans(c, cmp) if cmp is not None else None


@lru_cache(maxsize=None)
def _prove_d(s, t):
    if s == t:
        return _refl(s)
    if isinstance(t, InterD):
        a = _prove_d(s, t.left)
        b = a and _prove_d(s, t.right)
        return _glb(a, b) if b else None
    if isinstance(s, InterD):
        for side, part in (("l", s.left), ("r", s.right)):
            c = _prove_d(part, t)
            if c is not None:
                return _trans(_proj(s, side), c)
        return None
    match s, t:
        case Nu(), ArrowOmega():
            return SubtypeCertificate(s, t, "nu-om")
        case ArrowOmega(), Nu():
            return SubtypeCertificate(s, t, "om-nu")
        case Arrow(k1), Arrow(k2):
            c = _prove_c(k2, k1)
            return SubtypeCertificate(s, t, "contra", (c,)) if c is not None else None
    return None


def prove_subtype(s, t):
    """Structural certificate search; independent of the canonical-form decision."""
    srt = sort_of(s)
    if sort_of(t) != srt:
        raise SortError("subtyping compares types of the same sort")
    return _prove_d(s, t) if srt == "D" else _prove_c(s, t)


def subtype(s, t, sort: str | None = None) -> SubtypeCertificate | None:
    """A replayable certificate for ``s <= t``, or None when ``s`` is not below ``t``."""
    if sort is not None:
        _check_sort(s, sort)
        _check_sort(t, sort)
    if not leq(s, t):
        return None
    cert = prove_subtype(s, t)
    if cert is None:
        raise AssertionError(f"decision and certificate search disagree on "
                             f"{print_type(s)} <= {print_type(t)}")
    return cert


# -- certificate text --------------------------------------------------------

def parse_certificate(text: str) -> SubtypeCertificate:
    cert, pos = read_certificate(text, 0)
    if text[pos:].strip():
        raise TypeSyntaxError(f"trailing input after certificate at {pos}")
    return cert


def read_certificate(text: str, pos: int) -> tuple[SubtypeCertificate, int]:
    """Read one ``(rule [lhs <= rhs] children...)`` starting at ``pos``."""
    pos = _skip(text, pos)
    if text[pos:pos + 1] != "(":
        raise TypeSyntaxError(f"expected '(' at {pos}")
    m = re.compile(r"\(\s*([a-z-]+)\s*\[").match(text, pos)
    if not m:
        raise TypeSyntaxError(f"malformed certificate node at {pos}")
    rule = m.group(1)
    close = text.index("]", m.end())
    lhs_text, sep, rhs_text = text[m.end():close].partition("<=")
    if not sep:
        raise TypeSyntaxError(f"certificate pair without '<=' at {m.end()}")
    lhs = parse_type(lhs_text)
    rhs = parse_type(rhs_text, sort_of(lhs))
    pos = _skip(text, close + 1)
    kids = []
    while text[pos:pos + 1] == "(":
        kid, pos = read_certificate(text, pos)
        kids.append(kid)
        pos = _skip(text, pos)
    if text[pos:pos + 1] != ")":
        raise TypeSyntaxError(f"expected ')' at {pos}")
    return SubtypeCertificate(lhs, rhs, rule, tuple(kids)), pos + 1


def _skip(text, pos):
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos
