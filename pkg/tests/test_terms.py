"""Signature DSL, term parsing, and linearization."""

import pytest
from hypothesis import given, strategies as st

from slo.terms import (
    DslError,
    Identity,
    Signature,
    Term,
    canonical_identity,
    identification_images,
    is_linear,
    is_linear_identity,
    is_regular,
    linearize,
    parse_identity,
    parse_signature,
    parse_term,
)

SIG_TEXT = """
signature CDIS
  op mul:2
  op add:2      # the join
  const one
  join add
  unit one
end
"""


def test_parse_signature_roundtrip():
    sig = parse_signature(SIG_TEXT)
    assert sig.name == "CDIS"
    assert sig.arity("mul") == 2
    assert sig.arity("one") == 0
    assert sig.join_symbol == "add"
    assert sig.unit_symbol == "one"
    again = parse_signature(sig.to_dsl())
    assert again == sig


def test_signature_validation():
    with pytest.raises(DslError):
        parse_signature("signature X op f:2 op f:1 end")
    with pytest.raises(DslError):
        parse_signature("signature X op plus:3 join plus end")
    with pytest.raises(DslError):
        parse_signature("signature X op f:2")  # missing end


def test_parse_term_and_identity():
    sig = parse_signature(SIG_TEXT)
    t = parse_term("mul(x, add(y, one))", sig)
    assert str(t) == "mul(x, add(y, one))"
    assert t.var_set() == {"x", "y"}
    ident = parse_identity("mul(x, y) = mul(y, x)", sig)
    assert isinstance(ident, Identity)
    with pytest.raises(DslError):
        parse_term("mul(x)", sig)  # arity mismatch
    with pytest.raises(DslError):
        parse_term("mul(x, y) extra", sig)


def test_linear_and_regular_predicates():
    sig = parse_signature(SIG_TEXT)
    lin = parse_identity("mul(x, y) = mul(y, x)", sig)
    nonlin = parse_identity("mul(x, x) = x", sig)
    assert is_linear_identity(lin)
    assert not is_linear_identity(nonlin)
    assert is_regular(lin)
    assert is_regular(parse_identity("mul(x, y) = add(y, x)", sig))
    assert not is_regular(parse_identity("mul(x, y) = x", sig))


def test_linearize_repeated_variable():
    sig = parse_signature(SIG_TEXT)
    t = parse_term("mul(x, mul(y, x))", sig)
    lin = linearize(t)
    assert is_linear(lin.linear_term)
    # repeated variables are split left to right, single ones keep their name
    assert lin.multiplicities == {"x": 2, "y": 1}
    assert sorted(lin.identification.values()) == ["x", "x", "y"]
    # substituting the identification back recovers the original term
    restored = lin.linear_term.substitute(
        {fresh: Term.var(orig) for fresh, orig in lin.identification.items()})
    assert restored == t


def test_linearize_fixes_linear_terms():
    sig = parse_signature(SIG_TEXT)
    t = parse_term("mul(x, add(y, z))", sig)
    lin = linearize(t)
    assert lin.linear_term == t
    assert all(fresh == orig for fresh, orig in lin.identification.items())


def test_identification_images_cover_idempotency():
    sig = parse_signature(SIG_TEXT)
    linear = parse_identity("mul(x, y) = add(x, y)", sig)
    images = identification_images([linear])
    canon = {canonical_identity(i) for i in images}
    collapsed = canonical_identity(parse_identity("mul(x, x) = add(x, x)", sig))
    assert collapsed in canon
    assert canonical_identity(linear) in canon


def test_identification_images_reject_nonlinear():
    sig = parse_signature(SIG_TEXT)
    with pytest.raises(ValueError):
        identification_images([parse_identity("mul(x, x) = x", sig)])


# --- property tests ---------------------------------------------------------

_SIG = parse_signature(SIG_TEXT)
_VARS = st.sampled_from(["x", "y", "z"])


def _terms(depth):
    if depth == 0:
        return _VARS.map(Term.var)
    sub = _terms(depth - 1)
    return st.one_of(
        _VARS.map(Term.var),
        st.just(Term.app("one")),
        st.tuples(st.sampled_from(["mul", "add"]), sub, sub).map(
            lambda t: Term.app(t[0], t[1], t[2])))


@given(_terms(3))
def test_term_print_parse_roundtrip(t):
    assert parse_term(str(t), _SIG) == t


@given(_terms(3))
def test_linearization_invariants(t):
    lin = linearize(t)
    assert is_linear(lin.linear_term)
    restored = lin.linear_term.substitute(
        {fresh: Term.var(orig) for fresh, orig in lin.identification.items()})
    assert restored == t
    assert sum(lin.multiplicities.values()) == len(lin.linear_term.distinct_vars())
