"""Brute-force fixpoint over a finite universe of types: the completeness oracle for ``subtype``."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .kernels import transitive_closure
from .types import (
    ARROW_OMEGA, NU, Arrow, ArrowOmega, InterC, InterD, Nu, Prod, ProdOmega,
    sort_of,
)


class UniverseTooLarge(ValueError):
    pass


# -- enumeration ---------------------------------------------------------------

@lru_cache(maxsize=None)
def term_types_of_size(n: int) -> tuple:
    out = []
    if n == 1:
        out += [NU, ARROW_OMEGA]
    if n > 1:
        out += [Arrow(k) for k in cont_types_of_size(n - 1)]
    for i in range(1, n - 1):
        out += [InterD(a, b) for a in term_types_of_size(i) for b in term_types_of_size(n - 1 - i)]
    return tuple(out)


@lru_cache(maxsize=None)
def cont_types_of_size(n: int) -> tuple:
    out = []
    if n > 1:
        out += [ProdOmega(d) for d in term_types_of_size(n - 1)]
    for i in range(1, n - 1):
        out += [Prod(a, b) for a in term_types_of_size(i) for b in cont_types_of_size(n - 1 - i)]
        out += [InterC(a, b) for a in cont_types_of_size(i) for b in cont_types_of_size(n - 1 - i)]
    return tuple(out)


def types_up_to(size: int) -> list:
    """Every type over the atom nu with syntactic size at most ``size``."""
    out = []
    for n in range(1, size + 1):
        out += term_types_of_size(n)
        out += cont_types_of_size(n)
    return out


def _subterms(t, acc):
    if t in acc:
        return
    acc.add(t)
    match t:
        case Arrow(k):
            _subterms(k, acc)
        case ProdOmega(d):
            _subterms(d, acc)
        case Prod(d, k) | InterD(d, k) | InterC(d, k):
            _subterms(d, acc)
            _subterms(k, acc)


def _rule_rhs(t, present):
    """Right-hand sides of axiom instances whose left-hand side is ``t``."""
    match t:
        case Nu():
            yield ARROW_OMEGA
        case ArrowOmega():
            yield NU
        case Prod(d1, ProdOmega(_)):
            yield ProdOmega(d1)
        case InterC(ProdOmega(d1), Prod(d2, k)):
            yield Prod(InterD(d1, d2), k)
        case InterC(Prod(d1, k1), Prod(d2, k2)):
            yield Prod(InterD(d1, d2), InterC(k1, k2))


def close_universe(types, cap: int = 20000) -> list:
    """Subterm closure plus one round of rule right-hand sides (and their subterms)."""
    acc: set = set()
    for t in types:
        _subterms(t, acc)
    for t in list(acc):
        for r in _rule_rhs(t, acc):
            _subterms(r, acc)
    if len(acc) > cap:
        raise UniverseTooLarge(f"universe has {len(acc)} types, cap is {cap}")
    return sorted(acc, key=lambda t: (repr(type(t)), repr(t)))


# -- fixpoint ----------------------------------------------------------------

class DeclarativeOracle:
    """The least relation on a finite universe closed under the preorder's rules.

    Every pair it contains has a derivation whose intermediate types all lie in
    the universe, so it is sound; it is only as complete as the universe is rich.
    """

    def __init__(self, universe, cap: int = 20000):
        self.types = list(dict.fromkeys(universe))
        if len(self.types) > cap:
            raise UniverseTooLarge(f"universe has {len(self.types)} types, cap is {cap}")
        self.index = {t: i for i, t in enumerate(self.types)}
        self.rounds = 0
        self.rel = self._fixpoint()

    def _fixpoint(self):
        idx = self.index
        n = len(self.types)
        rel = np.eye(n, dtype=bool)
        po, po_h = [], []
        pr, pr_h, pr_t = [], [], []
        it, it_l, it_r = [], [], []
        ar, ar_a = [], []
        for i, t in enumerate(self.types):
            for r in _rule_rhs(t, idx):
                if r in idx:
                    rel[i, idx[r]] = True
            match t:
                case InterD(a, b) | InterC(a, b):
                    if a in idx and b in idx:
                        rel[i, idx[a]] = rel[i, idx[b]] = True
                        it.append(i), it_l.append(idx[a]), it_r.append(idx[b])
                case ProdOmega(d) if d in idx:
                    po.append(i), po_h.append(idx[d])
                case Prod(d, k) if d in idx and k in idx:
                    pr.append(i), pr_h.append(idx[d]), pr_t.append(idx[k])
                case Arrow(k) if k in idx:
                    ar.append(i), ar_a.append(idx[k])
        po, po_h, pr, pr_h, pr_t, it, it_l, it_r, ar, ar_a = map(
            np.asarray, (po, po_h, pr, pr_h, pr_t, it, it_l, it_r, ar, ar_a))
        while True:
            self.rounds += 1
            before = rel.copy()
            rel = transitive_closure(rel) | rel
            if po.size:
                rel[np.ix_(po, po)] |= rel[np.ix_(po_h, po_h)]
            if pr.size:
                rel[np.ix_(pr, pr)] |= rel[np.ix_(pr_h, pr_h)] & rel[np.ix_(pr_t, pr_t)]
            if it.size:
                rel[:, it] |= rel[:, it_l] & rel[:, it_r]
            if ar.size:
                rel[np.ix_(ar, ar)] |= rel[np.ix_(ar_a, ar_a)].T
            if np.array_equal(rel, before):
                return rel

    def holds(self, s, t) -> bool:
        try:
            return bool(self.rel[self.index[s], self.index[t]])
        except KeyError as exc:
            raise ValueError(f"type not in universe: {exc}") from None

    def pairs(self, sort=None):
        """All (s, t, verdict) with s, t of the same sort."""
        for i, s in enumerate(self.types):
            srt = sort_of(s)
            if sort is not None and srt != sort:
                continue
            for j, t in enumerate(self.types):
                if sort_of(t) == srt:
                    yield s, t, bool(self.rel[i, j])


_ORACLES: dict = {}


def declarative_oracle(s, t, universe, cap: int = 20000) -> bool:
    """Whether ``s <= t`` is derivable inside ``universe`` (closed first)."""
    key = frozenset(universe) | {s, t}
    oracle = _ORACLES.get(key)
    if oracle is None:
        oracle = DeclarativeOracle(close_universe(key, cap), cap)
        _ORACLES[key] = oracle
    return oracle.holds(s, t)
