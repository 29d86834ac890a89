import pytest

from lambdamu.judgements import (
    EMPTY, Ctx, Derivation, DerivationError, Judgement, abs_, ax, check_derivation, ctx_inter,
    ctx_leq, format_derivation, mu_, parse_derivation, strengthen, weaken,
)
from lambdamu.syntax import parse_term
from lambdamu.types import ARROW_OMEGA, NU, InterD, parse_type

T = parse_type


def test_ax_valid():
    d = ax({"x": NU}, "x")
    assert check_derivation(d) == Judgement(Ctx({"x": NU}), parse_term("x"), NU, EMPTY)


def test_abs_with_omega_tail():
    d = abs_("x", ax({"x": ARROW_OMEGA}, "x"))
    assert d.type == T("(om -> nu) * om -> nu")
    check_derivation(d)


def test_mu_rename_needs_target_name():
    prem = ax({"x": T("nu*om -> nu")}, "x", {"a": T("nu*om"), "b": T("nu*om")})
    good = mu_("a", "b", prem)
    check_derivation(good)
    broken = Derivation("MuRename", good.judgement,
                        (ax({"x": T("nu*om -> nu")}, "x", {"a": T("nu*om")}),))
    with pytest.raises(DerivationError):
        check_derivation(broken)


def test_ctx_inter():
    assert ctx_inter({"x": NU}, {"x": ARROW_OMEGA}) == Ctx({"x": InterD(NU, ARROW_OMEGA)})
    assert ctx_inter({"x": NU}, {"y": NU}) == Ctx({"x": NU, "y": NU})
    g = Ctx({"x": NU})
    assert ctx_inter(EMPTY, g) == g


def test_ctx_leq():
    assert ctx_leq({"x": InterD(NU, ARROW_OMEGA)}, {"x": NU})
    assert not ctx_leq({}, {"x": NU})
    g1, g2 = {"x": NU, "y": ARROW_OMEGA}, {"x": T("nu*om -> nu")}
    both = ctx_inter(g1, g2)
    assert ctx_leq(both, g1) and ctx_leq(both, g2)


def test_weaken():
    d = ax({"x": NU}, "x")
    w = weaken(d, {"x": InterD(NU, ARROW_OMEGA)}, {})
    assert w.rule == "Leq" and w.premises[0].rule == "Ax"
    check_derivation(w)
    w2 = weaken(d, {"x": NU, "y": NU}, {})
    assert w2.rule == "Ax" and w2.basis == Ctx({"x": NU, "y": NU})


def test_weaken_rejects_bound_identifier():
    d = abs_("x", ax({"x": ARROW_OMEGA}, "x"))
    with pytest.raises(ValueError):
        weaken(d, {"x": NU}, {})


def test_strengthen():
    d = ax({"x": NU, "y": NU}, "x")
    assert strengthen(d).basis == Ctx({"x": NU})
    prem = ax({"x": T("nu*om -> nu")}, "x", {"a": T("nu*om"), "c": T("nu*om")})
    s = strengthen(mu_("a", "a", prem))
    assert "c" not in s.names
    check_derivation(s)
    assert strengthen(s).judgement == s.judgement


def test_text_round_trip():
    d = weaken(abs_("x", ax({"x": ARROW_OMEGA}, "x")), {"z": NU}, {})
    assert parse_derivation(format_derivation(d)) == d


def test_convention_repair_renames_bound_variable():
    inner = ax({"x": ARROW_OMEGA}, "x")
    d = abs_("x", inner)
    clash = Derivation(d.rule, Judgement(Ctx({"x": NU}), d.subject, d.type, EMPTY),
                       (Derivation("Ax", Judgement(Ctx({"x": ARROW_OMEGA}), parse_term("x"), ARROW_OMEGA, EMPTY)),))
    log: list = []
    j = check_derivation(clash, log)
    assert log and log[0][0] == "x"
    assert j.basis == Ctx({"x": NU})
