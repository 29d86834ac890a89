"""Abstract syntax of lambda-mu terms: construction, parsing, printing, binding."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence, Union


class LambdaMuSyntaxError(ValueError):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class Abs:
    var: str
    body: "Term"


@dataclass(frozen=True, slots=True)
class App:
    fun: "Term"
    arg: "Term"


@dataclass(frozen=True, slots=True)
class Command:
    """``[name] body``; occurs only directly under a mu-abstraction."""

    name: str
    body: "Term"


@dataclass(frozen=True, slots=True)
class Mu:
    name: str
    cmd: Command


Term = Union[Var, Abs, App, Mu]
Stack = Sequence[Term]


def mu(bound: str, target: str, body: Term) -> Mu:
    return Mu(bound, Command(target, body))


def apply_stack(m: Term, stack: Iterable[Term]) -> Term:
    for item in stack:
        m = App(m, item)
    return m


def spine(m: Term) -> tuple[Term, list[Term]]:
    """Split ``h A1 ... An`` into its head and argument list."""
    args = []
    while isinstance(m, App):
        args.append(m.arg)
        m = m.fun
    args.reverse()
    return m, args


def size(m: Term) -> int:
    match m:
        case Var():
            return 1
        case Abs(_, body):
            return 1 + size(body)
        case App(f, a):
            return 1 + size(f) + size(a)
        case Mu(_, Command(_, body)):
            return 1 + size(body)
    raise TypeError(m)


# -- free and bound identifiers ------------------------------------------------

def free_occurrences(m: Term) -> tuple[frozenset[str], frozenset[str]]:
    """Return ``(free variables, free names)`` of ``m``."""
    fv: set[str] = set()
    fn: set[str] = set()
    _free(m, frozenset(), frozenset(), fv, fn)
    return frozenset(fv), frozenset(fn)


def _free(m, bvars, bnames, fv, fn):
    while True:
        match m:
            case Var(x):
                if x not in bvars:
                    fv.add(x)
                return
            case Abs(x, body):
                bvars = bvars | {x}
                m = body
            case App(f, a):
                _free(f, bvars, bnames, fv, fn)
                m = a
            case Mu(a, Command(b, body)):
                bnames = bnames | {a}
                if b not in bnames:
                    fn.add(b)
                m = body


def free_vars(m: Term) -> frozenset[str]:
    return free_occurrences(m)[0]


def free_names(m: Term) -> frozenset[str]:
    return free_occurrences(m)[1]


def bound_identifiers(m: Term) -> tuple[set[str], set[str]]:
    bv: set[str] = set()
    bn: set[str] = set()
    stack = [m]
    while stack:
        t = stack.pop()
        match t:
            case Abs(x, body):
                bv.add(x)
                stack.append(body)
            case App(f, a):
                stack.append(f)
                stack.append(a)
            case Mu(a, Command(_, body)):
                bn.add(a)
                stack.append(body)
    return bv, bn


def identifiers(m: Term) -> set[str]:
    """Every identifier occurring in ``m``, free or bound, in either namespace."""
    out: set[str] = set()
    stack = [m]
    while stack:
        t = stack.pop()
        match t:
            case Var(x):
                out.add(x)
            case Abs(x, body):
                out.add(x)
                stack.append(body)
            case App(f, a):
                stack.append(f)
                stack.append(a)
            case Mu(a, Command(b, body)):
                out.add(a)
                out.add(b)
                stack.append(body)
    return out


_TRAILING_DIGITS = re.compile(r"\d+$")


def fresh(base: str, avoid) -> str:
    """Least ``base + n`` (n >= 1, trailing digits of ``base`` dropped) not in ``avoid``."""
    stem = _TRAILING_DIGITS.sub("", base)
    n = 1
    while f"{stem}{n}" in avoid:
        n += 1
    return f"{stem}{n}"


# -- alpha equivalence -------------------------------------------------------

def alpha_key(m: Term):
    """A hashable key equal for exactly the alpha-equivalent terms.

    Bound variables become ``("b", depth)`` de Bruijn levels, kept apart from
    bound names; free identifiers stay as they are.
    """
    return _key(m, {}, {}, 0)


def _key(m, venv, nenv, depth):
    match m:
        case Var(x):
            lvl = venv.get(x)
            return ("v", x) if lvl is None else ("b", lvl)
        case Abs(x, body):
            return ("L", _key(body, {**venv, x: depth}, nenv, depth + 1))
        case App(f, a):
            return ("A", _key(f, venv, nenv, depth), _key(a, venv, nenv, depth))
        case Mu(a, Command(b, body)):
            inner = {**nenv, a: depth}
            lvl = inner.get(b)
            target = ("n", b) if lvl is None else ("c", lvl)
            return ("M", target, _key(body, venv, inner, depth + 1))
    raise TypeError(m)


def alpha_eq(t1: Term, t2: Term) -> bool:
    return t1 == t2 or alpha_key(t1) == alpha_key(t2)


# -- renaming ----------------------------------------------------------------

def rename_free_var(m: Term, old: str, new: str) -> Term:
    """Replace free occurrences of variable ``old`` by ``new`` (``new`` must not be captured)."""
    match m:
        case Var(x):
            return Var(new) if x == old else m
        case Abs(x, body):
            return m if x == old else Abs(x, rename_free_var(body, old, new))
        case App(f, a):
            return App(rename_free_var(f, old, new), rename_free_var(a, old, new))
        case Mu(a, Command(b, body)):
            return Mu(a, Command(b, rename_free_var(body, old, new)))
    raise TypeError(m)


def rename_free_name(m: Term, old: str, new: str) -> Term:
    match m:
        case Var():
            return m
        case Abs(x, body):
            return Abs(x, rename_free_name(body, old, new))
        case App(f, a):
            return App(rename_free_name(f, old, new), rename_free_name(a, old, new))
        case Mu(a, Command(b, body)):
            if a == old:
                return m
            return Mu(a, Command(new if b == old else b, rename_free_name(body, old, new)))
    raise TypeError(m)


def hygienize(m: Term, avoid: Iterable[str] = ()) -> Term:
    """Alpha-rename so that every binder is distinct from every other binder,
    from every free identifier of ``m`` and from ``avoid``."""
    fv, fn = free_occurrences(m)
    used = set(fv) | set(fn) | set(avoid)
    seen: set[str] = set()
    return _hyg(m, {}, {}, used, seen)


def _hyg(m, venv, nenv, used, seen):
    match m:
        case Var(x):
            return Var(venv.get(x, x))
        case Abs(x, body):
            y = x if x not in used and x not in seen else fresh(x, used | seen)
            seen.add(y)
            return Abs(y, _hyg(body, {**venv, x: y}, nenv, used, seen))
        case App(f, a):
            return App(_hyg(f, venv, nenv, used, seen), _hyg(a, venv, nenv, used, seen))
        case Mu(a, Command(b, body)):
            c = a if a not in used and a not in seen else fresh(a, used | seen)
            seen.add(c)
            inner = {**nenv, a: c}
            return Mu(c, Command(inner.get(b, b), _hyg(body, venv, inner, used, seen)))
    raise TypeError(m)


def is_hygienic(m: Term, context_ids: Iterable[str] = ()) -> bool:
    """No binder shadows an enclosing binder, a free identifier, or ``context_ids``."""
    fv, fn = free_occurrences(m)
    outer = set(fv) | set(fn) | set(context_ids)
    return _hygienic(m, outer)


def _hygienic(m, scope):
    match m:
        case Var():
            return True
        case Abs(x, body):
            return x not in scope and _hygienic(body, scope | {x})
        case App(f, a):
            return _hygienic(f, scope) and _hygienic(a, scope)
        case Mu(a, Command(_, body)):
            return a not in scope and _hygienic(body, scope | {a})
    raise TypeError(m)


# -- positions ---------------------------------------------------------------

def subterm_at(m: Term, path: Sequence[int]) -> Term:
    for i in path:
        match m:
            case Abs(_, body) if i == 0:
                m = body
            case App(f, a) if i in (0, 1):
                m = f if i == 0 else a
            case Mu(_, Command(_, body)) if i == 0:
                m = body
            case _:
                raise IndexError(f"no child {i} in {print_term(m)}")
    return m


def replace_at(m: Term, path: Sequence[int], new: Term) -> Term:
    if not path:
        return new
    i, rest = path[0], path[1:]
    match m:
        case Abs(x, body) if i == 0:
            return Abs(x, replace_at(body, rest, new))
        case App(f, a) if i == 0:
            return App(replace_at(f, rest, new), a)
        case App(f, a) if i == 1:
            return App(f, replace_at(a, rest, new))
        case Mu(a, Command(b, body)) if i == 0:
            return Mu(a, Command(b, replace_at(body, rest, new)))
    raise IndexError(f"no child {i} in {print_term(m)}")


# -- concrete syntax ---------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<ident>[a-zA-Z][a-zA-Z0-9_]*)|(?P<sym>[\\.()\[\]]))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while True:
        while pos < len(text) and text[pos].isspace():
            if text[pos] == "\n":
                line += 1
                line_start = pos + 1
            pos += 1
        if pos >= len(text):
            break
        match = _TOKEN.match(text, pos)
        if not match:
            raise LambdaMuSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = "ident" if match.group("ident") else "sym"
        value = match.group(kind)
        start = match.start(kind)
        tokens.append((kind, value, line, start - line_start + 1))
        pos = match.end()
    tokens.append(("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return LambdaMuSyntaxError(message, tok[2], tok[3])

    def take(self, value=None, kind=None):
        tok = self.peek()
        if tok[0] == "eof" or (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = value or kind
            got = tok[1] or "end of input"
            raise self.error(f"expected {want!r}, got {got!r}")
        self.i += 1
        return tok

    def ident(self):
        tok = self.take(kind="ident")
        if tok[1] == "mu":
            raise self.error("'mu' is a keyword", tok)
        return tok

    def term(self, bvars, bnames):
        tok = self.peek()
        if tok[1] == "\\":
            self.i += 1
            x = self.ident()
            if x[1] in bnames:
                raise self.error(f"{x[1]!r} is already bound as a name", x)
            self.take(".")
            return Abs(x[1], self.term(bvars | {x[1]}, bnames))
        if tok[0] == "ident" and tok[1] == "mu":
            self.i += 1
            a = self.ident()
            if a[1] in bvars:
                raise self.error(f"{a[1]!r} is already bound as a variable", a)
            self.take(".")
            self.take("[")
            b = self.ident()
            inner = bnames | {a[1]}
            if b[1] in bvars:
                raise self.error(f"{b[1]!r} is bound as a variable, not a name", b)
            self.take("]")
            return Mu(a[1], Command(b[1], self.term(bvars, inner)))
        return self.appseq(bvars, bnames)

    def appseq(self, bvars, bnames):
        m = self.atom(bvars, bnames)
        while True:
            tok = self.peek()
            if tok[0] == "ident" and tok[1] != "mu" or tok[1] == "(":
                m = App(m, self.atom(bvars, bnames))
            else:
                return m

    def atom(self, bvars, bnames):
        tok = self.peek()
        if tok[1] == "(":
            self.i += 1
            m = self.term(bvars, bnames)
            self.take(")")
            return m
        if tok[0] == "ident" and tok[1] != "mu":
            self.i += 1
            if tok[1] in bnames:
                raise self.error(f"{tok[1]!r} is bound as a name, not a variable", tok)
            return Var(tok[1])
        raise self.error(f"unexpected {tok[1] or 'end of input'!r}")


def parse_term(text: str) -> Term:
    p = _Parser(text)
    m = p.term(frozenset(), frozenset())
    tok = p.peek()
    if tok[0] != "eof":
        raise p.error(f"unexpected {tok[1]!r}")
    return m


def print_term(m: Term) -> str:
    match m:
        case Var(x):
            return x
        case Abs(x, body):
            return f"\\{x}.{print_term(body)}"
        case Mu(a, Command(b, body)):
            return f"mu {a}.[{b}] {print_term(body)}"
        case App():
            head, args = spine(m)
            parts = [_paren(head) if not isinstance(head, Var) else head.name]
            parts += [a.name if isinstance(a, Var) else _paren(a) for a in args]
            return " ".join(parts)
    raise TypeError(m)


def _paren(m):
    return f"({print_term(m)})"
