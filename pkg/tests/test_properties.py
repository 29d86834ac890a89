"""Property tests over randomly generated terms, types and contexts."""

from hypothesis import given, settings, strategies as st

from lambdamu.judgements import Ctx, ax, check_derivation, ctx_inter, ctx_leq, weaken
from lambdamu.reduction import SN, Strategy, normalize, sn_classify
from lambdamu.syntax import Abs, App, Command, Mu, Var, alpha_eq, hygienize, is_hygienic, parse_term, print_term
from lambdamu.synthesis import Typed, synthesize
from lambdamu.types import (
    ARROW_OMEGA, NU, Arrow, InterC, InterD, Prod, ProdOmega, canonicalize, check_certificate,
    leq, parse_certificate, format_certificate, parse_type, print_type, subtype, type_eq,
)

VARS = st.sampled_from("xyz")
NAMES = st.sampled_from("abc")

terms = st.recursive(
    VARS.map(Var),
    lambda t: st.one_of(
        st.builds(Abs, VARS, t),
        st.builds(App, t, t),
        st.builds(lambda a, b, m: Mu(a, Command(b, m)), NAMES, NAMES, t),
    ),
    max_leaves=6,
)

@st.composite
def dtype(draw, depth=3):
    choices = ["nu", "om"] + (["arrow", "inter"] if depth > 0 else [])
    match draw(st.sampled_from(choices)):
        case "nu":
            return NU
        case "om":
            return ARROW_OMEGA
        case "arrow":
            return Arrow(draw(ctype(depth - 1)))
        case "inter":
            return InterD(draw(dtype(depth - 1)), draw(dtype(depth - 1)))


@st.composite
def ctype(draw, depth=3):
    choices = ["prod_om"] + (["prod", "inter"] if depth > 0 else [])
    head = draw(dtype(max(depth - 1, 0)))
    match draw(st.sampled_from(choices)):
        case "prod_om":
            return ProdOmega(head)
        case "prod":
            return Prod(head, draw(ctype(depth - 1)))
        case "inter":
            return InterC(draw(ctype(depth - 1)), draw(ctype(depth - 1)))


small_d = dtype()
small_c = ctype()
contexts = st.dictionaries(VARS, small_d, max_size=3).map(Ctx)


@given(terms)
def test_term_print_round_trip(m):
    assert parse_term(print_term(m)) == m


@given(terms)
def test_hygienize_preserves_alpha_class(m):
    h = hygienize(m)
    assert alpha_eq(h, m) and is_hygienic(h)


@given(st.one_of(small_d, small_c))
def test_type_print_round_trip(t):
    assert parse_type(print_type(t)) == t


@given(st.one_of(small_d, small_c))
def test_subtype_reflexive(t):
    cert = subtype(t, t)
    assert cert is not None and check_certificate(cert)


@settings(max_examples=200)
@given(small_c, small_c, small_c)
def test_subtype_transitive(a, b, c):
    if leq(a, b) and leq(b, c):
        assert leq(a, c)


@settings(max_examples=200)
@given(st.one_of(st.tuples(small_d, small_d), st.tuples(small_c, small_c)))
def test_decision_matches_certificates(pair):
    s, t = pair
    cert = subtype(s, t)
    assert (cert is not None) == leq(s, t)
    if cert is not None:
        assert check_certificate(cert)
        assert parse_certificate(format_certificate(cert)) == cert


@given(st.one_of(small_d, small_c))
def test_canonicalize_equivalent(t):
    assert type_eq(canonicalize(t), t)


@given(small_d, small_d)
def test_meet_is_glb(s, t):
    m = InterD(s, t)
    assert leq(m, s) and leq(m, t)


@given(contexts, contexts)
def test_ctx_inter_below_both(g1, g2):
    g = ctx_inter(g1, g2)
    assert ctx_leq(g, g1) and ctx_leq(g, g2)


@given(small_d, small_d)
def test_weaken_axiom_checks(t, extra):
    d = ax({"x": t}, "x")
    w = weaken(d, {"x": InterD(t, extra), "y": extra}, {})
    j = check_derivation(w)
    assert j.type == t and j.basis["y"] == extra


@settings(max_examples=60, deadline=None)
@given(terms)
def test_confluence_on_sn_terms(m):
    if isinstance(sn_classify(m, 2000), SN):
        a, _ = normalize(m, Strategy.LOR, 2000)
        b, _ = normalize(m, Strategy.FULL_LEFTMOST, 2000)
        assert alpha_eq(a, b)


@settings(max_examples=60, deadline=None)
@given(terms)
def test_sn_terms_are_typed(m):
    if isinstance(sn_classify(m, 2000), SN):
        res = synthesize(m)
        assert isinstance(res, Typed)
        assert alpha_eq(check_derivation(res.derivation).subject, m)
