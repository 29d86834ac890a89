import pytest

from lambdamu.judgements import ax, check_derivation, ctx_inter, ctx_leq, weaken
from lambdamu.reduction import contract_at, lor_redex
from lambdamu.syntax import Var, alpha_eq, parse_term
from lambdamu.synthesis import (
    Typed, Unknown, expand_beta, expand_lor, expand_mu, subst_split_name, subst_split_var,
    synthesize, type_normal_form,
)
from lambdamu.types import InterD, parse_type, subtype

P, T = parse_term, parse_type
X = T("nu*om -> nu")


def test_tnf_variable():
    d = type_normal_form(P("x"))
    assert d.type == X and d.basis["x"] == X
    check_derivation(d)


def test_tnf_identity():
    d = type_normal_form(P(r"\x.x"))
    assert d.type == T("(nu*om -> nu) * nu*om -> nu")
    assert not d.basis


def test_tnf_mu_rename():
    d = type_normal_form(P("mu a.[b] x"))
    assert d.rule == "MuRename"
    check_derivation(d)


def test_tnf_rejects_redexes():
    with pytest.raises(ValueError):
        type_normal_form(P(r"(\x.x) y"))


def test_split_var_single():
    d = ax({"y": X}, "y")
    dt, dm, dq = subst_split_var(d, Var("x"), "x", Var("y"))
    assert dt == X and dm.rule == "Ax" and dm.subject == Var("x")
    check_derivation(dq)


def test_split_var_meets_occurrences():
    d = type_normal_form(P("y y"))
    dt, dm, dq = subst_split_var(d, P("x x"), "x", Var("y"))
    assert len(list(_components(dt))) == 2
    check_derivation(dm)
    assert dm.subject == P("x x")


def _components(t):
    if isinstance(t, InterD):
        yield from _components(t.left)
        yield from _components(t.right)
    else:
        yield t


def test_split_name_structural():
    d = type_normal_form(P("mu c.[a] x y"))
    dt, dm, dq = subst_split_name(d, P("mu c.[a] x"), "a", Var("y"))
    check_derivation(dm)
    assert dm.subject == P("mu c.[a] x")
    # a : kappa becomes a : delta' * kappa
    assert dt == X and dm.names["a"] == T("(nu*om -> nu) * nu*om")


def test_expand_beta():
    redex = P(r"(\x.x) y")
    r = expand_beta(redex, ax({"y": X}, "y"), ax({"y": X}, "y"))
    assert r.subject == redex and r.type == X
    check_derivation(r)


def test_expand_beta_vacuous():
    redex = P(r"(\x.z) y")
    g = {"y": X, "z": X}
    r = expand_beta(redex, ax(g, "z"), ax(g, "y"))
    check_derivation(r)
    assert r.basis["y"] == X


@pytest.mark.parametrize("redex", ["(mu a.[b] x) y", "(mu a.[a] x) y", "(mu a.[a] x (mu b.[a] y)) z"])
def test_expand_mu(redex):
    m = P(redex)
    contractum = contract_at(m, lor_redex(m))
    d_c = type_normal_form(contractum) if _nf(contractum) else synthesize(contractum).derivation
    d_n = type_normal_form(m.arg)
    g, n = ctx_inter(d_c.basis, d_n.basis), ctx_inter(d_c.names, d_n.names)
    r = expand_mu(m, weaken(d_c, g, n), weaken(d_n, g, n))
    check_derivation(r)
    assert r.subject == m


def _nf(m):
    from lambdamu.reduction import is_normal_form
    return is_normal_form(m)


@pytest.mark.parametrize("term", [r"(\x.x) y", r"\z.(\x.x) y", r"mu a.[a] (\x.x) y"])
def test_expand_lor_contract(term):
    m = P(term)
    r = lor_redex(m)
    reduct = contract_at(m, r)
    d_n = type_normal_form(reduct)
    d_q = type_normal_form(r.arg)
    steps = []
    out = expand_lor(m, d_n, d_q, on_step=lambda a, b: steps.append((a, b)))
    check_derivation(out)
    assert steps
    for d1, d3 in steps:
        assert ctx_leq(d3.basis, d1.basis) and ctx_leq(d3.names, d1.names)
        assert subtype(d1.type, d3.type) is not None


@pytest.mark.parametrize("term", [
    r"\x.x", r"(\x.x)(\y.y)", r"(\x.\y.x) z w", r"(\x.x x)(\y.y)",
    r"(mu a.[a] x (mu b.[a] y)) z", r"\y.mu a.[a] y (\x.mu b.[a] x)",
])
def test_synthesize(term):
    m = P(term)
    res = synthesize(m)
    assert isinstance(res, Typed)
    assert alpha_eq(check_derivation(res.derivation).subject, m)


def test_synthesize_identity_type():
    res = synthesize(P(r"\x.x"))
    assert res.derivation.type == T("(nu*om -> nu) * nu*om -> nu")


def test_omega_is_unknown():
    res = synthesize(P(r"(\x.x x)(\x.x x)"), fuel=100)
    assert isinstance(res, Unknown) and res.stage == "Normalizing"
    assert str(res) == "UNKNOWN stage=Normalizing fuel=100"
