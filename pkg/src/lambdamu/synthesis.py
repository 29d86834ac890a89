"""Constructive typeability of strongly normalising terms.

Normal forms are typed directly; every other term is typed by walking its
leftmost-outermost reduction to normal form backwards, expanding the derivation
of each reduct into one for the term before it.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

from .judgements import (
    Ctx, Derivation, abs_, app, ax, check_derivation, ctx_inter,
    ctx_leq, extend, format_derivation, inter_all_derivations, leq, mu_, strengthen,
    transport, weaken,
)
from .reduction import FuelExhausted, Strategy, contract_at, is_normal_form, lor_redex, normalize
from .syntax import (
    Abs, App, Command, Mu, Term, Var, alpha_key, free_occurrences, hygienize,
    is_hygienic, spine,
)
from .types import (
    ARROW_OMEGA, NU, OMEGA, Arrow, InterC, InterD, Nu, Prod, ProdOmega,
    arrow, arrow_arg, components, inter_all, leq as type_leq, prod, subtype,
)


class SynthesisError(RuntimeError):
    """An internal construction failed; never expected on strongly normalising input."""


@dataclass(frozen=True)
class Typed:
    derivation: Derivation

    def __str__(self):
        return format_derivation(self.derivation)


@dataclass(frozen=True)
class Unknown:
    fuel_spent: int
    stage: str

    def __str__(self):
        return f"UNKNOWN stage={self.stage} fuel={self.fuel_spent}"


SynthesisResult = Typed | Unknown

NU_OM = ProdOmega(NU)


# -- context plumbing --------------------------------------------------------

def _map_ctx(d: Derivation, fb, fn) -> Derivation:
    j = d.judgement
    nj = replace(j, basis=fb(j.basis), names=fn(j.names))
    return replace(d, judgement=nj, premises=tuple(_map_ctx(p, fb, fn) for p in d.premises))


def set_name_type(d: Derivation, a: str, t) -> Derivation:
    """Retype ``a`` everywhere in ``d``; sound when ``a`` is not free in the subject."""
    return _map_ctx(d, lambda g: g, lambda n: n.set(a, t) if a in n else n)


def drop_name(d: Derivation, a: str) -> Derivation:
    return _map_ctx(d, lambda g: g, lambda n: n.without(a))


def join(ds) -> Derivation:
    """Intersect derivations of one subject after weakening them to common contexts."""
    ds = list(ds)
    if len(ds) == 1:
        return ds[0]
    g, n = ds[0].basis, ds[0].names
    for d in ds[1:]:
        g, n = ctx_inter(g, d.basis), ctx_inter(n, d.names)
    return inter_all_derivations([weaken(d, g, n) for d in ds])


def _as_arrow(d: Derivation) -> Derivation:
    return leq(d, ARROW_OMEGA) if isinstance(d.type, Nu) else d


def _unique(ds):
    seen = {}
    for d in ds:
        seen.setdefault(d.type, d)
    return list(seen.values())


# -- generation --------------------------------------------------------------

def gen(d: Derivation, target) -> Derivation:
    """The last syntax-directed node above ``d`` whose type is below ``target`` (no intersection)."""
    while d.rule in ("Leq", "Inter"):
        if d.rule == "Leq":
            d = d.premises[0]
            continue
        for p in d.premises:
            if type_leq(p.type, target):
                d = p
                break
        else:
            raise SynthesisError("no intersection component below the target")
    return d


def gen_app(d: Derivation, target) -> tuple[Derivation, Derivation]:
    """From ``MN : kappa -> nu`` get ``M : delta * kappa -> nu`` and ``N : delta``."""
    if isinstance(target, Nu):
        target = ARROW_OMEGA
    node = gen(d, target)
    if node.rule != "App":
        raise SynthesisError(f"expected an application node, found {node.rule}")
    f, a = node.premises
    return leq(f, Arrow(prod(a.type, arrow_arg(target)))), a


def gen_abs(d: Derivation, target: Arrow) -> tuple[Derivation, object]:
    """From ``\\y.M : delta * kappa -> nu`` get ``y:delta |- M : kappa0 -> nu``.

    ``kappa0`` is ``kappa`` unless the abstraction was typed with an omega tail,
    in which case it is omega; the second component is ``kappa0``.
    """
    node = gen(d, target)
    if node.rule != "Abs":
        raise SynthesisError(f"expected an abstraction node, found {node.rule}")
    y = node.subject.var
    k = target.arg
    delta = k.head
    kappa = OMEGA if isinstance(k, ProdOmega) else k.tail
    p = node.premises[0]
    if arrow_arg(p.type) is OMEGA:
        kappa = OMEGA
    p = weaken(p, p.basis.set(y, delta), p.names)
    return leq(p, arrow(kappa)), kappa


def gen_mu(d: Derivation, target: Arrow) -> Derivation:
    """From ``mu a.[b]M : kappa -> nu`` get the premise with ``a : kappa`` exactly."""
    node = gen(d, target)
    if node.rule not in ("MuSame", "MuRename"):
        raise SynthesisError(f"expected a mu node, found {node.rule}")
    a = node.subject.name
    p = node.premises[0]
    p = weaken(p, p.basis, p.names.set(a, target.arg))
    if node.rule == "MuSame":
        p = leq(p, target)
    return p


# -- normal forms ------------------------------------------------------------

def type_normal_form(n: Term) -> Derivation:
    """A derivation ``Gamma |- n : kappa -> nu | Delta`` for a normal form ``n``."""
    if not is_normal_form(n):
        raise ValueError("type_normal_form needs a normal form")
    if not is_hygienic(n):
        raise ValueError("type_normal_form needs distinct binders, apart from free identifiers")
    return _tnf(n)


def _tnf(n: Term) -> Derivation:
    match n:
        case Abs(x, body):
            d = _tnf(body)
            if x not in d.basis:
                d = extend(d, {x: NU}, {})
            return abs_(x, d)
        case Mu(a, Command(b, body)):
            d = _tnf(body)
            kappa = d.type.arg
            if a == b:
                if a in d.names:
                    merged = _meet_c(kappa, d.names[a])
                    d = leq(weaken(d, d.basis, d.names.set(a, merged)), Arrow(merged))
                else:
                    d = extend(d, {}, {a: kappa})
                return mu_(a, a, d)
            if b in d.names:
                merged = _meet_c(kappa, d.names[b])
                d = leq(weaken(d, d.basis, d.names.set(b, merged)), Arrow(merged))
            else:
                d = extend(d, {}, {b: kappa})
            if a not in d.names:
                d = extend(d, {}, {a: NU_OM})
            return mu_(a, b, d)
    head, args = spine(n)
    ds = [_tnf(a) for a in args]
    k = NU_OM
    for d in reversed(ds):
        k = Prod(d.type, k)
    xt = Arrow(k)
    g, names = Ctx(), Ctx()
    for d in ds:
        g, names = ctx_inter(g, d.basis), ctx_inter(names, d.names)
    g = ctx_inter(g, {head.name: xt})
    cur = leq(ax(g, head.name, names), xt)
    for d in ds:
        cur = app(cur, weaken(d, g, names))
    return cur


# -- substitution splitting ----------------------------------------------------

def subst_split_var(d: Derivation, p: Term, y: str, q: Term):
    """Split ``Gamma |- p[q/y] : delta | Delta`` (``y`` free in ``p``).

    Returns ``(delta', derivation of Gamma, y:delta' |- p, derivation of Gamma |- q : delta')``.
    """
    found: list[Derivation] = []

    def collect(d, s):
        if s == Var(y):
            found.append(d)
            return
        if y not in free_occurrences(s)[0]:
            return
        for sub_d, sub_s in _children(d, s):
            collect(sub_d, sub_s)

    collect(d, p)
    if not found:
        raise SynthesisError(f"no occurrence of {y} typed in the derivation")
    g, n = d.basis, d.names
    qs = _unique(weaken(strengthen(f), g, n) for f in found)
    dq = inter_all_derivations(qs)
    delta = dq.type

    def rebuild(d, s):
        if s == Var(y):
            return leq(ax(d.basis.set(y, delta), y, d.names), d.type)
        if y not in free_occurrences(s)[0]:
            return extend(d, {y: delta}, {})
        kids = tuple(rebuild(sd, ss) for sd, ss in _children(d, s))
        j = replace(d.judgement, basis=d.basis.set(y, delta), subject=s)
        return replace(d, judgement=j, premises=kids)

    return delta, rebuild(d, p), dq


def subst_split_name(d: Derivation, p: Term, a: str, q: Term):
    """Split ``Gamma |- p<a <= q> : delta | a:kappa, Delta`` (``a`` free in ``p``).

    Returns ``(delta', derivation with a : delta' * kappa, derivation of Gamma |- q : delta' | Delta)``.
    """
    found: list[Derivation] = []
    kappa = d.names[a]

    def collect(d, s):
        if a not in free_occurrences(s)[1]:
            return
        if _names_a(d, s, a):
            f, arg = gen_app(d.premises[0], d.premises[0].type)
            found.append(arg)
            collect(f, s.cmd.body)
            return
        for sub_d, sub_s in _children(d, s):
            collect(sub_d, sub_s)

    collect(d, p)
    if not found:
        raise SynthesisError(f"no command naming {a} typed in the derivation")
    g, n = d.basis, d.names.without(a)
    qs = _unique(weaken(strengthen(f), g, n) for f in found)
    dq = inter_all_derivations(qs)
    new = Prod(dq.type, kappa)

    def rebuild(d, s):
        if a not in free_occurrences(s)[1]:
            return set_name_type(d, a, new)
        j = replace(d.judgement, names=d.names.set(a, new), subject=s)
        if _names_a(d, s, a):
            f, _ = gen_app(d.premises[0], d.premises[0].type)
            body = leq(rebuild(f, s.cmd.body), Arrow(new))
            return replace(d, judgement=j, premises=(body,))
        kids = tuple(rebuild(sd, ss) for sd, ss in _children(d, s))
        return replace(d, judgement=j, premises=kids)

    return dq.type, rebuild(d, p), dq


def _names_a(d, s, a):
    return d.rule == "MuRename" and isinstance(s, Mu) and s.cmd.name == a and s.name != a


def _children(d: Derivation, s: Term):
    """Pair each premise of ``d`` with the corresponding part of the pre-substitution term ``s``."""
    match d.rule:
        case "Leq" | "Inter":
            return [(p, s) for p in d.premises]
        case "Abs":
            return [(d.premises[0], s.body)]
        case "App":
            return [(d.premises[0], s.fun), (d.premises[1], s.arg)]
        case "MuSame" | "MuRename":
            return [(d.premises[0], s.cmd.body)]
    return []


# -- contractum expansion ----------------------------------------------------

def expand_beta(redex: App, d_c: Derivation, d_n: Derivation) -> Derivation:
    """``Gamma |- (\\x.M)N : delta | Delta`` from the contractum's derivation and one for ``N``."""
    x, body, arg = redex.fun.var, redex.fun.body, redex.arg
    out = []
    for c in _unique_types(d_c.type):
        part = leq(d_c, c)
        was_nu = isinstance(c, Nu)
        part = _as_arrow(part)
        if x in free_occurrences(body)[0]:
            _, d_body, d_arg = subst_split_var(part, body, x, arg)
        else:
            d_body, d_arg = extend(part, {x: d_n.type}, {}), d_n
        r = app(abs_(x, d_body), d_arg)
        out.append(leq(r, NU) if was_nu else r)
    return inter_all_derivations(out)


def expand_mu(redex: App, d_c: Derivation, d_n: Derivation) -> Derivation:
    """``Gamma |- (mu a.[b]M)N : delta | Delta`` from the contractum's derivation and one for ``N``."""
    mu_term, arg = redex.fun, redex.arg
    a, b, body = mu_term.name, mu_term.cmd.name, mu_term.cmd.body
    out = []
    for c in _unique_types(d_c.type):
        p = gen_mu(leq(d_c, c), c)
        kappa = c.arg
        if a != b and a not in free_occurrences(body)[1]:
            p = set_name_type(p, a, Prod(d_n.type, kappa))
            out.append(app(mu_(a, b, p), d_n))
        elif a == b:
            f, q = gen_app(p, p.type)
            q = drop_name(q, a)
            if a in free_occurrences(body)[1]:
                delta2, f2, q2 = subst_split_name(f, body, a, arg)
                both = _meet(f.type.arg.head, delta2)
                f2 = leq(f2, Arrow(Prod(both, kappa)))
                f2 = weaken(f2, f2.basis, f2.names.set(a, Prod(both, kappa)))
                out.append(app(mu_(a, a, f2), q if q.type == q2.type else join([q, q2])))
            else:
                f = set_name_type(f, a, f.type.arg)
                out.append(app(mu_(a, a, f), q))
        else:
            delta2, p2, q2 = subst_split_name(p, body, a, arg)
            out.append(app(mu_(a, b, p2), q2))
    return inter_all_derivations(out)


def _meet(d1, d2):
    return d1 if d1 == d2 else InterD(d1, d2)


def _unique_types(t):
    return list(dict.fromkeys(components(t)))


# -- leftmost-outermost expansion ------------------------------------------

StepHook = Callable[[Derivation, Derivation], None]


def contract_holds(d1: Derivation, d3: Derivation) -> bool:
    """``Gamma3 <= Gamma1``, ``Delta3 <= Delta1`` and ``delta1 <= delta3``."""
    return (ctx_leq(d3.basis, d1.basis) and ctx_leq(d3.names, d1.names)
            and subtype(d1.type, d3.type) is not None)


def expand_lor(m: Term, d_n: Derivation, d_q: Derivation, on_step: StepHook | None = None) -> Derivation:
    """A derivation for ``m`` from one for its lor-reduct (type not an intersection) and one for the redex argument."""
    r = lor_redex(m)
    if r is None:
        raise ValueError("expand_lor needs a term with a redex")
    if d_n.subject != contract_at(m, r):
        raise ValueError("derivation subject is not the lor-reduct of the term")
    if len(components(d_n.type)) != 1:
        raise ValueError("expand_lor needs a derivation whose type is not an intersection")
    return _expand(m, r.path, d_n, d_q, on_step)


def _expand(m, path, d1, dq, on_step):
    d3 = _expand_case(m, path, _as_arrow(d1), dq, on_step)
    if on_step is not None:
        on_step(d1, d3)
    if not contract_holds(d1, d3):
        raise SynthesisError(f"expansion contract violated at {m}")
    return d3


def _expand_case(m, path, d1, dq, on_step):
    tau = d1.type
    if isinstance(m, Abs) and path and path[0] == 0 and not isinstance(m, App):
        y = m.var
        if isinstance(tau.arg, InterC):
            # Arrow(k1 & k2) <= Arrow((heads meet) * (tails meet))
            d1 = leq(d1, Arrow(_product_below(tau.arg)))
            tau = d1.type
        premise, kappa0 = gen_abs(d1, tau)
        r = _expand(m.body, path[1:], premise, dq, on_step)
        r = _as_arrow(r)
        res = abs_(y, r)
        want_tail = OMEGA if isinstance(tau.arg, ProdOmega) else tau.arg.tail
        if kappa0 is OMEGA and want_tail is not OMEGA:
            res = leq(res, Arrow(Prod(res.type.arg.head, want_tail)))
        return res
    if isinstance(m, Mu):
        a, b = m.name, m.cmd.name
        premise = gen_mu(d1, tau)
        r = _expand(m.cmd.body, path[1:], premise, dq, on_step)
        if a == b:
            merged = _meet_c(r.names[a], r.type.arg)
            r = weaken(r, r.basis, r.names.set(a, merged))
            return mu_(a, a, leq(r, Arrow(merged)))
        merged = _meet_c(r.names[b], r.type.arg)
        r = weaken(r, r.basis, r.names.set(b, merged))
        return mu_(a, b, leq(r, Arrow(merged)))
    head, args = spine(m)
    n = len(args)
    # peel the spine of the reduct: head' : d'1 * ... * d'n * kappa1 -> nu
    reduct = d1
    arg_ds = []
    target = tau
    for _ in range(n if isinstance(head, Var) else n - 1):
        f, a = gen_app(reduct, target)
        arg_ds.append(a)
        reduct, target = f, f.type
    arg_ds.reverse()
    if isinstance(head, Var):
        return _expand_var_spine(head.name, args, path, reduct, arg_ds, dq, on_step)
    redex = App(head, args[0])
    g3, n3 = ctx_inter(d1.basis, dq.basis), ctx_inter(d1.names, dq.names)
    h = weaken(reduct, g3, n3)
    q = weaken(dq, g3, n3)
    if isinstance(head, Abs):
        cur = expand_beta(redex, h, q)
    else:
        cur = expand_mu(redex, h, q)
    for a in arg_ds:
        cur = app(cur, weaken(a, g3, n3))
    return cur


def _product_below(k):
    """A single product below every component of the intersection ``k``."""
    parts = components(k)
    head = inter_all(list(dict.fromkeys(p.head for p in parts)))
    tails = list(dict.fromkeys(p.tail for p in parts if isinstance(p, Prod)))
    return Prod(head, inter_all(tails)) if tails else ProdOmega(head)


def _meet_c(k1, k2):
    return k1 if k1 == k2 else InterC(k1, k2)


def _expand_var_spine(z, args, path, head_d, arg_ds, dq, on_step):
    n = len(args)
    zeros = 0
    while path[zeros] == 0:
        zeros += 1
    j = n - 1 - zeros
    rest = path[zeros + 1:]
    parts = [_expand(args[j], rest, leq(arg_ds[j], c), dq, on_step)
             for c in _unique_types(arg_ds[j].type)]
    pj = join(parts)
    k = head_d.type.arg
    heads = []
    while isinstance(k, Prod) and len(heads) < n:
        heads.append(k.head)
        k = k.tail
    if len(heads) < n:
        heads.append(k.head)
        k = OMEGA
    heads[j] = pj.type
    zt_arg = k
    for h in reversed(heads):
        zt_arg = prod(h, zt_arg)
    zt = Arrow(zt_arg)
    g3 = ctx_inter(ctx_inter(head_d.basis, pj.basis), {z: zt})
    n3 = ctx_inter(head_d.names, pj.names)
    cur = leq(ax(g3, z, n3), zt)
    for i, a in enumerate(arg_ds):
        cur = app(cur, weaken(pj if i == j else a, g3, n3))
    return cur


# -- the driver ----------------------------------------------------------------

class _OutOfFuel(Exception):
    def __init__(self, stage):
        self.stage = stage


class _Synth:
    def __init__(self, fuel: int, on_step: StepHook | None):
        self.fuel = fuel
        self.spent = 0
        self.on_step = on_step
        self.memo: dict = {}

    def run(self, m: Term, stage: str) -> Derivation:
        key = alpha_key(m)
        if key in self.memo:
            return transport(self.memo[key], m) if is_hygienic(m) else self.memo[key]
        mh = hygienize(m)
        try:
            nf, trace = normalize(mh, Strategy.LOR, self.fuel - self.spent)
        except FuelExhausted as exc:
            self.spent += len(exc.trace)
            raise _OutOfFuel(stage) from None
        except RecursionError:
            # reducts deeper than the interpreter stack: treat as out of resources
            self.spent = self.fuel
            raise _OutOfFuel(stage) from None
        self.spent += len(trace)
        d = strengthen(_tnf(hygienize(nf)))
        terms = trace.terms()
        for i in reversed(range(len(trace.steps))):
            before = hygienize(terms[i])
            r = lor_redex(before)
            reduct = contract_at(before, r)
            d_n = transport(d, reduct)
            q = r.arg
            d_q = strengthen(self.run(q, "Expanding"))
            if not is_hygienic(q):
                raise SynthesisError("redex argument is not hygienic")
            d_q = transport(d_q, q)
            parts = [_expand(before, r.path, leq(d_n, c), d_q, self.on_step)
                     for c in _unique_types(d_n.type)]
            d = strengthen(join(parts))
        self.memo[key] = d
        return d


def synthesize(m: Term, fuel: int = 1000, on_step: StepHook | None = None) -> SynthesisResult:
    """Type ``m`` by expansion along its lor-reduction, within ``fuel`` reduction steps overall."""
    s = _Synth(fuel, on_step)
    try:
        d = s.run(m, "Normalizing")
    except _OutOfFuel as exc:
        return Unknown(s.spent, exc.stage)
    try:
        moved = transport(d, m)
        check_derivation(moved)
        d = moved
    except ValueError:
        # the input breaks the variable convention; keep the hygienic subject
        check_derivation(d)
    return Typed(d)
