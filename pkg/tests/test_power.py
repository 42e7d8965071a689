"""Complex operations and power-algebra variants."""

import itertools

import pytest

from slo.algebra import AlgebraError, catalog, chain_semilattice, fan_semilattice
from slo.free import free_semilattice, free_semilattice_unit
from slo.power import (
    PowerVariant,
    build_power,
    complex_linear_term,
    complex_op,
    nonlinear_inclusion_check,
    subset_label,
)
from slo.terms import Term, parse_term


def _all_subsets(alg, include_empty=True):
    start = 0 if include_empty else 1
    return [frozenset(i for i in range(alg.size) if mask >> i & 1)
            for mask in range(start, 1 << alg.size)]


def test_complex_op_empty_annihilates():
    chain = chain_semilattice(3)
    assert complex_op(chain, "mul", [frozenset(), frozenset({0, 1})]) == frozenset()
    assert complex_op(chain, "mul", [frozenset({2}), frozenset()]) == frozenset()


def test_complex_op_pointwise():
    fan = fan_semilattice()
    a, b = fan.index("a"), fan.index("b")
    got = complex_op(fan, "mul", [frozenset({a, b}), frozenset({b})])
    assert got == frozenset({fan.apply("mul", (a, b)), b})


def test_complex_linear_term_rejects_nonlinear():
    chain = chain_semilattice(2)
    t = parse_term("mul(x, mul(x, y))", chain.sig)
    with pytest.raises(AlgebraError):
        complex_linear_term(chain, t, {"x": frozenset({0}), "y": frozenset({1})})


def test_nonlinear_inclusion_on_fan():
    fan = fan_semilattice()
    s = frozenset({fan.index("a"), fan.index("b")})
    t = parse_term("mul(x, x)", fan.sig)
    report = nonlinear_inclusion_check(fan, t, {"x": s})
    assert report.contained and report.proper
    assert report.pointwise == s  # idempotent base: pointwise image of x*x is x
    assert report.lifted == s | {fan.index("0")}


def test_variant_carriers():
    chain = chain_semilattice(2)
    for variant, expected in [
        (PowerVariant.NONEMPTY, 3),
        (PowerVariant.WITH_EMPTY, 4),
        (PowerVariant.WITH_UNIT, 3),
        (PowerVariant.WITH_EMPTY_AND_UNIT, 4),
    ]:
        power = build_power(chain, variant)
        assert power.alg.size == expected
        assert (power.zero is not None) == variant.include_empty
        assert (power.unit is not None) == variant.include_unit


def test_unit_variant_requires_unit():
    fan = fan_semilattice()
    with pytest.raises(AlgebraError):
        build_power(fan, PowerVariant.WITH_UNIT)


def test_union_is_join_and_labels():
    fsl = free_semilattice(["x", "y"])
    power = build_power(fsl, PowerVariant.WITH_EMPTY)
    alg = power.alg
    for i, s in enumerate(power.subsets):
        for j, t in enumerate(power.subsets):
            assert power.subsets[alg.apply("union", (i, j))] == s | t
    assert alg.carrier[power.zero] == "{}"
    assert subset_label(fsl, frozenset({fsl.index("x"), fsl.index("xy")})) == "{x,xy}"


def test_unit_singleton_acts_as_identity():
    base = free_semilattice_unit(["x"], unit_as_symbol=True)
    power = build_power(base, PowerVariant.WITH_UNIT)
    alg = power.alg
    one = power.unit
    for i in range(alg.size):
        assert alg.apply("mul", (i, one)) == i
        assert alg.apply("mul", (one, i)) == i


def test_distributivity_monotonicity_superdistributivity_catalog():
    """Union distributes slotwise, complex ops are monotone, and applying an
    op after union contains the union of the images (all catalog bases)."""
    for base in catalog(max_size=4):
        subsets = _all_subsets(base)
        for sym, arity in base.sig.ops:
            if arity == 0:
                continue
            for args in itertools.product(subsets, repeat=arity):
                image = complex_op(base, sym, args)
                for slot in range(arity):
                    for extra in subsets:
                        merged = list(args)
                        merged[slot] = args[slot] | extra
                        split = complex_op(
                            base, sym,
                            [extra if k == slot else a for k, a in enumerate(args)])
                        widened = complex_op(base, sym, merged)
                        assert widened == image | split
                        assert image <= widened  # monotone in every slot
            # superdistributivity: op of unions contains union of ops
            for a_args in itertools.product(subsets, repeat=arity):
                for b_args in itertools.product(subsets, repeat=arity):
                    merged = [a | b for a, b in zip(a_args, b_args)]
                    assert (complex_op(base, sym, a_args)
                            | complex_op(base, sym, b_args)
                            ) <= complex_op(base, sym, merged)
