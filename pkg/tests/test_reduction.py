import pytest

from lambdamu.reduction import (
    SN, FuelExhausted, NotSN, RedexKind, Strategy, contract_at, is_normal_form, lor_redex,
    normalize, redexes, sn_classify, struct_subst, struct_subst_stack, subst_term,
)
from lambdamu.syntax import Command, Var, alpha_eq, parse_term, print_term

P = parse_term


def test_subst():
    assert subst_term(Var("x"), "x", Var("y")) == Var("y")
    assert subst_term(P("mu a.[a] x"), "x", Var("z")) == P("mu a.[a] z")
    out = subst_term(P(r"\y.x"), "x", Var("y"))
    assert out.var != "y" and alpha_eq(out, P(r"\w.y"))


def test_struct_subst():
    assert struct_subst(Command("a", Var("x")), "a", Var("y")) == Command("a", P("x y"))
    assert struct_subst(Var("x"), "a", Var("y")) == Var("x")
    assert struct_subst(Command("b", P("mu c.[a] x")), "a", Var("y")) == Command("b", P("mu c.[a] x y"))
    assert struct_subst_stack(Var("x"), "a", []) == Var("x")
    assert struct_subst_stack(Command("a", Var("x")), "a", [Var("y"), Var("z")]) == Command("a", P("x y z"))
    assert struct_subst_stack(Var("x"), "a", [Var("y"), Var("z")]) == Var("x")


def test_redexes():
    assert [r.kind for r in redexes(P(r"(\x.x) y"))] == [RedexKind.BETA]
    assert [r.kind for r in redexes(P("(mu a.[a]x) y"))] == [RedexKind.MU]
    rs = redexes(P(r"x ((\y.y) z) ((\w.w) u)"))
    assert len(rs) == 2 and print_term(rs[0].arg) == "z"


@pytest.mark.parametrize("text, out", [
    (r"(\x.x x) y", "y y"),
    ("(mu a.[a] x) y", "mu a.[a] x y"),
    ("(mu a.[b] x) y", "mu a.[b] x"),
])
def test_contract_root(text, out):
    m = P(text)
    assert contract_at(m, lor_redex(m)) == P(out)


def test_lor():
    assert lor_redex(P(r"\x.x")) is None
    assert lor_redex(P(r"(\x.x)((\y.y) z)")).path == ()
    assert print_term(lor_redex(P(r"x ((\y.y) z) ((\w.w) u)")).arg) == "z"


def test_normalize():
    nf, trace = normalize(P(r"(\x.x) y"), Strategy.LOR, 10)
    assert nf == Var("y") and len(trace) == 1
    nf, trace = normalize(P(r"(mu a.[a] x)(\z.z) w"), Strategy.LOR, 10)
    assert nf == P(r"mu a.[a] x (\z.z) w") and len(trace) == 2
    with pytest.raises(FuelExhausted):
        normalize(P(r"(\x.x x)(\x.x x)"), Strategy.LOR, 50)


def test_trace_format():
    _, trace = normalize(P(r"(\x.x) ((\y.y) z)"), Strategy.FULL_LEFTMOST, 10)
    assert str(trace) == "Beta @ 1 => (\\x.x) z\nBeta @ root => z"


@pytest.mark.parametrize("text, nf", [
    (r"x (\y.y) z", True),
    (r"mu a.[b] \x.x", True),
    (r"(\x.x) y", False),
])
def test_is_normal_form(text, nf):
    assert is_normal_form(P(text)) is nf


def test_sn_classify():
    assert sn_classify(P(r"\x.x")) == SN(0)
    assert isinstance(sn_classify(P(r"(\x.x x)(\x.x x)")), NotSN)
    assert sn_classify(P(r"(\x.x) ((\y.y) z)")) == SN(2)
    assert str(sn_classify(P(r"(\x.x x)(\x.x x)"), 50)) == "NOT-SN cycle=1"
