"""Term enumeration and a curated set of classic terms."""

from __future__ import annotations

from functools import lru_cache

from .syntax import Abs, App, Command, Mu, Term, Var, parse_term

# size: Var 1, Abs 1 + body, App 1 + fun + arg, Mu 1 + command body


def term_size(m: Term) -> int:
    match m:
        case Var():
            return 1
        case Abs(_, b):
            return 1 + term_size(b)
        case App(f, a):
            return 1 + term_size(f) + term_size(a)
        case Mu(_, Command(_, b)):
            return 1 + term_size(b)
    raise TypeError(m)


@lru_cache(maxsize=None)
def _terms(n: int, nv: int, nn: int, free_vars: tuple, free_names: tuple) -> tuple:
    """Terms of size ``n`` whose bound identifiers are named by depth (one per alpha class)."""
    vs = free_vars + tuple(f"x{i}" for i in range(nv))
    ns = free_names + tuple(f"a{i}" for i in range(nn))
    out: list = []
    if n == 1:
        return tuple(Var(v) for v in vs)
    x = f"x{nv}"
    out += [Abs(x, b) for b in _terms(n - 1, nv + 1, nn, free_vars, free_names)]
    a = f"a{nn}"
    for b in _terms(n - 1, nv, nn + 1, free_vars, free_names):
        out += [Mu(a, Command(c, b)) for c in ns + (a,)]
    for i in range(1, n - 1):
        for f in _terms(i, nv, nn, free_vars, free_names):
            out += [App(f, g) for g in _terms(n - 1 - i, nv, nn, free_vars, free_names)]
    return tuple(out)


def closed_terms(max_size: int) -> list[Term]:
    """All closed terms (no free variables or names) up to ``max_size``, one per alpha class."""
    out: list = []
    for n in range(1, max_size + 1):
        out += _terms(n, 0, 0, (), ())
    return out


@lru_cache(maxsize=None)
def _nfs(n: int, nv: int, nn: int, free_vars: tuple, free_names: tuple) -> tuple:
    vs = free_vars + tuple(f"x{i}" for i in range(nv))
    ns = free_names + tuple(f"a{i}" for i in range(nn))
    out: list = []
    out += [s for s in _neutral(n, nv, nn, free_vars, free_names)]
    if n > 1:
        out += [Abs(f"x{nv}", b) for b in _nfs(n - 1, nv + 1, nn, free_vars, free_names)]
        a = f"a{nn}"
        for b in _nfs(n - 1, nv, nn + 1, free_vars, free_names):
            out += [Mu(a, Command(c, b)) for c in ns + (a,)]
    del vs
    return tuple(out)


@lru_cache(maxsize=None)
def _neutral(n: int, nv: int, nn: int, free_vars: tuple, free_names: tuple) -> tuple:
    """``x N1 ... Nk`` of size ``n``."""
    if n == 1:
        return tuple(Var(v) for v in free_vars + tuple(f"x{i}" for i in range(nv)))
    out: list = []
    for i in range(1, n - 1):
        for f in _neutral(i, nv, nn, free_vars, free_names):
            out += [App(f, g) for g in _nfs(n - 1 - i, nv, nn, free_vars, free_names)]
    return tuple(out)


def normal_forms(max_size: int, free_vars=("y",), free_names=("b",)) -> list[Term]:
    """Normal forms up to ``max_size`` over the given free identifiers, one per alpha class."""
    out: list = []
    for n in range(1, max_size + 1):
        out += _nfs(n, 0, 0, tuple(free_vars), tuple(free_names))
    return out


CURATED_SOURCES = {
    "I": r"\x.x",
    "K": r"\x.\y.x",
    "S": r"\x.\y.\z.x z (y z)",
    "zero": r"\f.\x.x",
    "one": r"\f.\x.f x",
    "two": r"\f.\x.f (f x)",
    "three": r"\f.\x.f (f (f x))",
    "succ": r"\n.\f.\x.f (n f x)",
    "succ one": r"(\n.\f.\x.f (n f x)) (\f.\x.f x)",
    "succ two": r"(\n.\f.\x.f (n f x)) (\f.\x.f (f x))",
    "two two": r"(\f.\x.f (f x)) (\f.\x.f (f x))",
    "two three": r"(\f.\x.f (f x)) (\f.\x.f (f (f x)))",
    "plus one two": r"(\m.\n.\f.\x.m f (n f x)) (\f.\x.f x) (\f.\x.f (f x))",
    "mu-jump": r"mu a.[a] \x.mu b.[a] x",
    "peirce": r"\y.mu a.[a] y (\x.mu b.[a] x)",
    "peirce applied": r"(\y.mu a.[a] y (\x.mu b.[a] x)) (\k.k (\z.z))",
    "mu redex": r"(mu a.[a] \x.mu b.[a] x) (\z.z)",
    "K I": r"(\x.\y.x) (\z.z)",
    "S K K": r"(\x.\y.\z.x z (y z)) (\x.\y.x) (\x.\y.x)",
    "delta I": r"(\x.x x) (\z.z)",
}

NON_SN_SOURCES = {
    "omega": r"(\x.x x) (\x.x x)",
    "fix": r"\f.(\x.f (x x)) (\x.f (x x))",
}


def curated_terms() -> dict[str, Term]:
    return {k: parse_term(v) for k, v in CURATED_SOURCES.items()}


def non_sn_terms() -> dict[str, Term]:
    return {k: parse_term(v) for k, v in NON_SN_SOURCES.items()}
