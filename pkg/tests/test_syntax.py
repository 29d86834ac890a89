import pytest

from lambdamu.syntax import (
    Abs, App, Command, LambdaMuSyntaxError, Mu, Var, alpha_eq, apply_stack, free_occurrences,
    hygienize, is_hygienic, parse_term, print_term,
)


@pytest.mark.parametrize("text, term", [
    ("x", Var("x")),
    (r"\x.x y", Abs("x", App(Var("x"), Var("y")))),
    (r"mu a.[a] (\x.x) z", Mu("a", Command("a", App(Abs("x", Var("x")), Var("z"))))),
])
def test_parse(text, term):
    assert parse_term(text) == term


def test_print():
    assert print_term(Var("x")) == "x"
    assert print_term(App(App(Var("x"), Var("y")), Var("z"))) == "x y z"
    delta = Abs("x", App(Var("x"), Var("x")))
    assert print_term(App(delta, delta)) == r"(\x.x x) (\x.x x)"


@pytest.mark.parametrize("bad", ["", r"\x.", "(x", "mu a.x", "x )", "[a] x"])
def test_parse_errors(bad):
    with pytest.raises(LambdaMuSyntaxError):
        parse_term(bad)


@pytest.mark.parametrize("text, fv, fn", [
    (r"\x.x y", {"y"}, set()),
    ("mu a.[b] x", {"x"}, {"b"}),
    ("mu a.[a] x", {"x"}, set()),
])
def test_free_occurrences(text, fv, fn):
    assert free_occurrences(parse_term(text)) == (frozenset(fv), frozenset(fn))


@pytest.mark.parametrize("s, t, eq", [
    (r"\x.x", r"\y.y", True),
    ("mu a.[a] x", "mu b.[b] x", True),
    ("mu a.[b] x", "mu a.[c] x", False),
    (r"\x.\y.x", r"\y.\x.x", False),
])
def test_alpha_eq(s, t, eq):
    assert alpha_eq(parse_term(s), parse_term(t)) is eq


def test_apply_stack():
    x, y, z = Var("x"), Var("y"), Var("z")
    assert apply_stack(x, []) == x
    assert apply_stack(x, [y, z]) == App(App(x, y), z)
    i = Abs("x", x)
    assert apply_stack(i, [y]) == App(i, y)


def test_hygienize_separates_binders():
    m = parse_term(r"(\x.x) (\x.x) x")
    h = hygienize(m)
    assert alpha_eq(h, m)
    assert is_hygienic(h)
    assert not is_hygienic(m)
