import pytest

from lambdamu.types import (
    NU, OMEGA, ArrowOmega, Nu, ProdOmega, Arrow, SortError, SubtypeCertificate, TypeSyntaxError,
    canonicalize, check_certificate, format_certificate, leq, length_c, parse_certificate,
    parse_type, print_type, subtype, type_eq,
)

T = parse_type


def test_parse():
    assert T("nu") == Nu()
    assert T("nu*om -> nu") == Arrow(ProdOmega(Nu()))
    assert T("om -> nu") == ArrowOmega()
    with pytest.raises((SortError, TypeSyntaxError)):
        T("om")


def test_sort_errors():
    with pytest.raises((SortError, TypeSyntaxError)):
        T("nu", "C")
    with pytest.raises((SortError, TypeSyntaxError)):
        T("nu*om", "D")


@pytest.mark.parametrize("text", [
    "nu", "om -> nu", "nu*om", "nu*om -> nu", "(nu*om -> nu) * nu*om -> nu",
    "nu & (om -> nu)", "(nu & nu) * (om -> nu) * om", "nu*om & nu*nu*om",
])
def test_print_round_trip(text):
    t = T(text)
    assert T(print_type(t)) == t


def test_omega_is_not_a_type():
    assert OMEGA is not NU
    assert T("om -> nu") == ArrowOmega()


@pytest.mark.parametrize("s, t", [
    ("nu", "om -> nu"),
    ("om -> nu", "nu"),
    ("nu*nu*om", "nu*om"),
    ("(nu*om) & ((om->nu)*nu*om)", "(nu & (om->nu))*nu*om"),
    ("nu & (om->nu)", "nu"),
    ("nu & (om->nu)", "(om->nu) & nu"),
])
def test_subtype_certified(s, t):
    cert = subtype(T(s), T(t))
    assert cert is not None
    assert check_certificate(cert)
    assert parse_certificate(format_certificate(cert)) == cert


@pytest.mark.parametrize("s, t", [
    ("nu*om", "nu*nu*om"),
    ("om -> nu", "nu*om -> nu"),
    ("nu*om & (nu*om -> nu)*om", "(nu & (nu*om -> nu))*om"),
])
def test_subtype_refuted(s, t):
    assert subtype(T(s), T(t)) is None
    assert not leq(T(s), T(t))


def test_certificate_checker():
    good = SubtypeCertificate(T("nu & (om->nu)"), NU, "proj-l", ())
    assert check_certificate(good)
    bogus = SubtypeCertificate(NU, T("nu*om -> nu"), "nu-om", ())
    res = check_certificate(bogus)
    assert not res and res.node == bogus
    # truncation then covariance
    a, b, c = T("(nu & nu)*nu*om"), T("(nu & nu)*om"), T("nu*om")
    inner1 = SubtypeCertificate(a, b, "trunc", ())
    proj = SubtypeCertificate(T("nu & nu"), NU, "proj-l", ())
    inner2 = SubtypeCertificate(b, c, "cov-om", (proj,))
    assert check_certificate(SubtypeCertificate(a, c, "trans", (inner1, inner2)))


def test_length():
    assert length_c(T("nu*om")) == 1
    assert length_c(T("nu*nu*om")) == 2
    assert length_c(T("(nu*om) & (nu*nu*om)")) == 2


@pytest.mark.parametrize("s, t, eq", [
    ("nu", "om -> nu", True),
    ("nu & (om->nu)", "(om->nu) & nu", True),
    ("nu*om", "nu*nu*om", False),
])
def test_type_eq(s, t, eq):
    assert type_eq(T(s), T(t)) is eq


def test_canonicalize_is_equivalent():
    for text in ["nu & (om->nu)", "nu*om & nu*om", "(nu*om) & ((om->nu)*nu*om)"]:
        t = T(text)
        assert type_eq(canonicalize(t), t)
