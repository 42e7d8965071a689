"""Generated subalgebras, the replica relation, its quotient, and reduced
subsets."""

import itertools

import pytest

from slo.algebra import fan_semilattice, is_idempotent, left_zero
from slo.closure import (
    PreconditionError,
    condition_one_check,
    enumerate_subalgebras,
    generated_subalgebra,
    is_reduced,
    quotient_by_rho,
    reduced_subsets,
    rho_equivalent,
    rho_witness,
)
from slo.free import free_semilattice, free_semilattice_unit
from slo.power import PowerVariant, build_power, complex_op
from slo.slo_laws import Violation, check_slo


def _all_subsets(alg):
    return [frozenset(i for i in range(alg.size) if mask >> i & 1)
            for mask in range(1 << alg.size)]


def test_generated_subalgebra_fixpoint():
    fsl = free_semilattice(["x", "y"])
    x, y, xy = fsl.index("x"), fsl.index("y"), fsl.index("xy")
    assert generated_subalgebra(fsl, {x, y}) == frozenset({x, y, xy})
    assert generated_subalgebra(fsl, {x}) == frozenset({x})
    assert generated_subalgebra(fsl, set()) == frozenset()


def test_constants_seed_every_subalgebra():
    base = free_semilattice_unit(["x"], unit_as_symbol=True)
    one = base.index("1")
    assert one in generated_subalgebra(base, {base.index("x")})
    assert generated_subalgebra(base, set()) == frozenset({one})


def test_enumerate_subalgebras_free_semilattice():
    fsl = free_semilattice(["x", "y"])
    subs = enumerate_subalgebras(fsl, include_empty=True)
    assert len(subs) == 7
    labels = {frozenset(fsl.carrier[i] for i in s) for s in subs}
    assert labels == {
        frozenset(), frozenset({"x"}), frozenset({"y"}), frozenset({"xy"}),
        frozenset({"x", "xy"}), frozenset({"y", "xy"}),
        frozenset({"x", "y", "xy"})}


def test_rho_is_an_equivalence():
    for base in (free_semilattice(["x", "y"]), fan_semilattice()):
        subsets = _all_subsets(base)
        for a in subsets:
            assert rho_equivalent(base, a, a)
        for a, b in itertools.combinations(subsets, 2):
            assert rho_equivalent(base, a, b) == rho_equivalent(base, b, a)
        eq = {(a, b) for a in subsets for b in subsets
              if rho_equivalent(base, a, b)}
        for a, b in eq:
            for c in subsets:
                if (b, c) in eq:
                    assert (a, c) in eq


def test_rho_requires_idempotent_entropic_base():
    sig = left_zero(2).sig
    # cyclic-dominance table: idempotent but not entropic
    beats = {(0, 1): 0, (1, 0): 0, (1, 2): 1, (2, 1): 1, (2, 0): 2, (0, 2): 2}
    table = {(i, j): i if i == j else beats[(i, j)]
             for i in range(3) for j in range(3)}
    from slo.algebra import FiniteAlgebra, is_entropic
    rps = FiniteAlgebra(sig, ("r", "p", "s"), {"mul": table})
    assert is_idempotent(rps) and not is_entropic(rps)
    with pytest.raises(PreconditionError):
        rho_equivalent(rps, {0}, {1})
    # non-idempotent bases are rejected too
    z2 = FiniteAlgebra(sig, ("0", "1"),
                       {"mul": {(i, j): (i + j) % 2 for i in range(2) for j in range(2)}})
    with pytest.raises(PreconditionError):
        rho_equivalent(z2, {0}, {1})


def test_rho_witness_terms():
    fsl = free_semilattice(["x", "y"])
    x, y, xy = fsl.index("x"), fsl.index("y"), fsl.index("xy")
    found = rho_witness(fsl, {x, y}, {x, y, xy})
    assert found is not None
    with pytest.raises(PreconditionError):
        rho_witness(fsl, {x}, {y})


def test_quotient_operations_well_defined():
    """Class operations do not depend on the chosen representatives."""
    for base in (free_semilattice(["x", "y"]), fan_semilattice()):
        subsets = [s for s in _all_subsets(base) if s]
        closure = {s: generated_subalgebra(base, s) for s in subsets}
        for a, a2 in itertools.product(subsets, repeat=2):
            if closure[a] != closure[a2]:
                continue
            for b in subsets:
                got = generated_subalgebra(base, complex_op(base, "mul", [a, b]))
                alt = generated_subalgebra(base, complex_op(base, "mul", [a2, b]))
                assert got == alt
                assert (generated_subalgebra(base, a | b)
                        == generated_subalgebra(base, a2 | b))


def test_quotient_by_rho_structure():
    base = free_semilattice(["x", "y"])
    power = build_power(base, PowerVariant.WITH_EMPTY)
    quotient = quotient_by_rho(power)
    # one class per subalgebra including the empty one
    assert quotient.slo.alg.size == 7
    assert is_idempotent(quotient.slo.alg)
    x, y = base.index("x"), base.index("y")
    assert quotient.class_index({x, y}) == quotient.class_index({x, y, base.index("xy")})
    # the quotient itself passes the full law check
    revalidated = check_slo(quotient.slo.alg, quotient.slo.join,
                            quotient.slo.zero, quotient.slo.unit)
    assert not isinstance(revalidated, Violation)


def test_quotient_unit_variant_labels():
    base = free_semilattice_unit(["x"])
    power = build_power(base, PowerVariant.WITH_EMPTY_AND_UNIT)
    assert condition_one_check(base)
    quotient = quotient_by_rho(power)
    assert set(quotient.slo.alg.carrier) == {"⟨⟩", "⟨⟩+1", "⟨x⟩", "⟨x⟩+1"}


def test_reduced_subsets_biject_with_subalgebras():
    for gens in (["x"], ["x", "y"], ["x", "y", "z"]):
        fsl = free_semilattice(gens)
        reduced = reduced_subsets(fsl)
        subs = enumerate_subalgebras(fsl, include_empty=True)
        closures = [generated_subalgebra(fsl, r) for r in reduced]
        assert len(set(closures)) == len(reduced)  # injective
        assert set(closures) == set(subs)  # surjective
        assert all(is_reduced(fsl, r) for r in reduced)


def test_reduced_subset_examples():
    fsl = free_semilattice(["x", "y"])
    x, y, xy = fsl.index("x"), fsl.index("y"), fsl.index("xy")
    assert is_reduced(fsl, {x, y})
    assert not is_reduced(fsl, {x, y, xy})  # xy is the product of the others
