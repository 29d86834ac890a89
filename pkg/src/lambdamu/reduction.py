"""Term and structural substitution, beta/mu reduction, strategies and an SN classifier."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .syntax import (
    Abs, App, Command, Mu, Term, Var,
    alpha_key, free_occurrences, identifiers, print_term, rename_free_name,
    rename_free_var, replace_at, subterm_at, fresh,
)


class RedexKind(enum.Enum):
    BETA = "Beta"
    MU = "Mu"


class Strategy(enum.Enum):
    LOR = "lor"
    FULL_LEFTMOST = "full"


@dataclass(frozen=True)
class RedexInfo:
    path: tuple[int, ...]
    kind: RedexKind
    fun_part: Term
    arg: Term

    def path_text(self) -> str:
        return ".".join(map(str, self.path)) if self.path else "root"


@dataclass(frozen=True)
class TraceStep:
    redex: RedexInfo
    result: Term

    def __str__(self):
        return f"{self.redex.kind.value} @ {self.redex.path_text()} => {print_term(self.result)}"


@dataclass
class ReductionTrace:
    source: Term
    steps: list[TraceStep] = field(default_factory=list)

    def __len__(self):
        return len(self.steps)

    @property
    def final(self) -> Term:
        return self.steps[-1].result if self.steps else self.source

    def terms(self) -> list[Term]:
        return [self.source] + [s.result for s in self.steps]

    def __str__(self):
        return "\n".join(str(s) for s in self.steps)


class FuelExhausted(Exception):
    def __init__(self, term: Term, trace: ReductionTrace):
        super().__init__(f"fuel exhausted after {len(trace)} steps")
        self.term = term
        self.trace = trace


class StaleRedex(ValueError):
    pass


# -- substitution ------------------------------------------------------------

def subst_term(m: Term, x: str, n: Term) -> Term:
    """``m[n/x]``, renaming binders of ``m`` that would capture free identifiers of ``n``."""
    fvn, fnn = free_occurrences(n)
    return _subst(m, x, n, fvn, fnn)


def _subst(m, x, n, fvn, fnn):
    match m:
        case Var(y):
            return n if y == x else m
        case Abs(y, body):
            if y == x:
                return m
            if y in fvn:
                z = fresh(y, fvn | identifiers(body) | {x})
                body = rename_free_var(body, y, z)
                y = z
            return Abs(y, _subst(body, x, n, fvn, fnn))
        case App(f, a):
            return App(_subst(f, x, n, fvn, fnn), _subst(a, x, n, fvn, fnn))
        case Mu(a, cmd):
            if a in fnn:
                m = _rename_mu_binder(m, fnn)
                a, cmd = m.name, m.cmd
            return Mu(a, Command(cmd.name, _subst(cmd.body, x, n, fvn, fnn)))
    raise TypeError(m)


def _rename_mu_binder(m: Mu, avoid) -> Mu:
    a = m.name
    b = fresh(a, set(avoid) | identifiers(m.cmd.body) | {m.cmd.name})
    body = rename_free_name(m.cmd.body, a, b)
    return Mu(b, Command(b if m.cmd.name == a else m.cmd.name, body))


def struct_subst(t, a: str, arg: Term):
    """Structural substitution: every ``[a]N`` inside ``t`` becomes ``[a](N arg)``."""
    fvl, fnl = free_occurrences(arg)
    return _ssubst(t, a, arg, fvl, fnl)


def _ssubst(t, a, arg, fvl, fnl):
    match t:
        case Command(b, body):
            body = _ssubst(body, a, arg, fvl, fnl)
            return Command(b, App(body, arg) if b == a else body)
        case Var():
            return t
        case Abs(y, body):
            if y in fvl:
                z = fresh(y, fvl | identifiers(body))
                body = rename_free_var(body, y, z)
                y = z
            return Abs(y, _ssubst(body, a, arg, fvl, fnl))
        case App(f, x):
            return App(_ssubst(f, a, arg, fvl, fnl), _ssubst(x, a, arg, fvl, fnl))
        case Mu(b, cmd):
            if b == a:
                return t
            if b in fnl:
                t = _rename_mu_binder(t, fnl | {a})
                b, cmd = t.name, t.cmd
            return Mu(b, _ssubst(cmd, a, arg, fvl, fnl))
    raise TypeError(t)


def struct_subst_stack(m, a: str, stack: Sequence[Term]):
    """``m<a <= L1><a <= L2>...``; no ``Li`` may contain ``a`` free."""
    for item in stack:
        if a in free_occurrences(item)[1]:
            raise ValueError(f"stack item {print_term(item)} contains free name {a}")
    for item in stack:
        m = struct_subst(m, a, item)
    return m


# -- redexes -----------------------------------------------------------------

def iter_redexes(m: Term, path: tuple[int, ...] = ()) -> Iterator[RedexInfo]:
    """All redexes of ``m`` in preorder: outer before inner, left before right."""
    stack = [(m, path)]
    while stack:
        t, p = stack.pop()
        match t:
            case App(f, a):
                if isinstance(f, Abs):
                    yield RedexInfo(p, RedexKind.BETA, f, a)
                elif isinstance(f, Mu):
                    yield RedexInfo(p, RedexKind.MU, f, a)
                stack.append((a, p + (1,)))
                stack.append((f, p + (0,)))
            case Abs(_, body):
                stack.append((body, p + (0,)))
            case Mu(_, Command(_, body)):
                stack.append((body, p + (0,)))


def redexes(m: Term) -> list[RedexInfo]:
    return list(iter_redexes(m))


def lor_redex(m: Term) -> RedexInfo | None:
    return next(iter_redexes(m), None)


def innermost_redex(m: Term) -> RedexInfo | None:
    """The leftmost redex that contains no other redex."""
    found = redexes(m)
    for i, r in enumerate(found):
        n = len(r.path)
        # preorder: anything nested in r follows it immediately
        if i + 1 == len(found) or found[i + 1].path[:n] != r.path:
            return r
    return None


def contract(redex: RedexInfo) -> Term:
    if redex.kind is RedexKind.BETA:
        return subst_term(redex.fun_part.body, redex.fun_part.var, redex.arg)
    mu_term = redex.fun_part
    if mu_term.name in free_occurrences(redex.arg)[1]:
        mu_term = _rename_mu_binder(mu_term, free_occurrences(redex.arg)[1])
    b = mu_term.name
    return Mu(b, struct_subst(mu_term.cmd, b, redex.arg))


def contract_at(m: Term, r: RedexInfo) -> Term:
    try:
        sub = subterm_at(m, r.path)
    except IndexError as exc:
        raise StaleRedex(str(exc)) from None
    expected = Abs if r.kind is RedexKind.BETA else Mu
    if not (isinstance(sub, App) and isinstance(sub.fun, expected)
            and sub.fun == r.fun_part and sub.arg == r.arg):
        raise StaleRedex(f"no {r.kind.value} redex at {r.path_text()} in {print_term(m)}")
    return replace_at(m, r.path, contract(r))


def is_normal_form(m: Term) -> bool:
    """Membership in the grammar ``x N1..Nk | \\x.N | mu a.[b] N``."""
    match m:
        case Var():
            return True
        case Abs(_, body):
            return is_normal_form(body)
        case Mu(_, Command(_, body)):
            return is_normal_form(body)
        case App():
            head = m
            args = []
            while isinstance(head, App):
                args.append(head.arg)
                head = head.fun
            return isinstance(head, Var) and all(is_normal_form(a) for a in args)
    raise TypeError(m)


def normalize(m: Term, strategy: Strategy = Strategy.LOR, fuel: int = 1000) -> tuple[Term, ReductionTrace]:
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    choose = lor_redex if strategy is Strategy.LOR else innermost_redex
    trace = ReductionTrace(m)
    t = m
    while True:
        r = choose(t)
        if r is None:
            return t, trace
        if len(trace) >= fuel:
            raise FuelExhausted(t, trace)
        t = contract_at(t, r)
        trace.steps.append(TraceStep(r, t))


# -- strong normalisation ----------------------------------------------------

@dataclass(frozen=True)
class SN:
    max_len: int

    def __str__(self):
        return f"SN {self.max_len}"


@dataclass(frozen=True)
class NotSN:
    cycle: tuple[Term, ...]

    def __str__(self):
        return f"NOT-SN cycle={len(self.cycle)}"


@dataclass(frozen=True)
class Unknown:
    fuel_spent: int

    def __str__(self):
        return f"UNKNOWN fuel={self.fuel_spent}"


SnVerdict = SN | NotSN | Unknown


def sn_classify(m: Term, fuel: int = 10000) -> SnVerdict:
    """Explore the whole reduction graph of ``m`` (up to alpha) within ``fuel`` distinct terms.

    Returns the longest reduction length when the graph is finite and acyclic,
    a cycle when one is found, and ``Unknown`` otherwise.
    """
    seen: dict = {}
    try:
        return _sn_classify(m, fuel, seen)
    except RecursionError:
        # terms nested deeper than the interpreter stack allows
        return Unknown(len(seen))


def _sn_classify(m: Term, fuel: int, terms: dict) -> SnVerdict:
    root = alpha_key(m)
    terms[root] = m
    succ: dict = {}
    longest: dict = {}
    on_stack: dict = {}
    path: list = []
    work = [(root, None)]
    while work:
        key, it = work.pop()
        if it is None:
            if key in longest:
                continue
            if key in on_stack:
                continue
            t = terms[key]
            kids = []
            for r in iter_redexes(t):
                n = contract_at(t, r)
                k = alpha_key(n)
                if k not in terms:
                    if len(terms) >= fuel:
                        return Unknown(len(terms))
                    terms[k] = n
                kids.append(k)
            succ[key] = kids
            on_stack[key] = len(path)
            path.append(key)
            it = iter(kids)
        for k in it:
            if k in on_stack:
                cycle = tuple(terms[p] for p in path[on_stack[k]:])
                return NotSN(cycle)
            if k not in longest:
                work.append((key, it))
                work.append((k, None))
                break
        else:
            path.pop()
            del on_stack[key]
            kids = succ[key]
            longest[key] = 1 + max(longest[k] for k in kids) if kids else 0
    return SN(longest[root])
