"""Finite algebras: tables, evaluation, identity checking, properties,
model enumeration, and file round-trips."""

import pytest

from slo.algebra import (
    AlgebraError,
    FiniteAlgebra,
    chain_semilattice,
    dump_algebra,
    enumerate_models,
    eval_term,
    fan_semilattice,
    is_conservative,
    is_entropic,
    is_idempotent,
    is_symmetric,
    left_zero,
    load_algebra,
    satisfies,
    two_element_distributive_lattice,
    units,
)
from slo.terms import Identity, Signature, Term, parse_identity, parse_term

SG = Signature("SG", (("mul", 2),))
ASSOC = parse_identity("mul(mul(x, y), z) = mul(x, mul(y, z))", SG)
COMM = parse_identity("mul(x, y) = mul(y, x)", SG)
IDEM = parse_identity("mul(x, x) = x", SG)


def test_table_validation():
    with pytest.raises(AlgebraError):
        FiniteAlgebra(SG, ("a", "b"), {"mul": {(0, 0): 0}})  # partial table
    with pytest.raises(AlgebraError):
        FiniteAlgebra(SG, ("a",), {"mul": {(0, 0): 3}})  # out of range


def test_eval_term_on_chain():
    chain = chain_semilattice(3)
    t = parse_term("mul(x, mul(y, z))", chain.sig)
    assert eval_term(chain, t, {"x": 2, "y": 1, "z": 0}) == 0
    assert eval_term(chain, t, {"x": 2, "y": 2, "z": 1}) == 1


def test_satisfies_with_witness():
    lz = left_zero(2)
    assert satisfies(lz, ASSOC)
    res = satisfies(lz, COMM)
    assert not res
    labels = res.witness_labels(lz)
    assert set(labels) == {"x", "y"}


def test_structural_properties():
    chain = chain_semilattice(3)
    assert is_idempotent(chain) and is_entropic(chain)
    assert is_symmetric(chain) and is_conservative(chain)
    assert units(chain) == frozenset({2})  # top of a meet chain
    fan = fan_semilattice()
    assert is_idempotent(fan) and not is_conservative(fan)  # a*b = 0
    assert units(fan) == frozenset()
    lz = left_zero(3)
    assert is_idempotent(lz) and not is_symmetric(lz)
    lattice = two_element_distributive_lattice()
    assert units(lattice) == frozenset()  # no element is a unit for both ops


def test_enumerate_models_semigroup_counts():
    counts = [sum(1 for _ in enumerate_models(SG, n, [ASSOC])) for n in (1, 2, 3)]
    assert counts == [1, 8, 113]


def test_enumerate_models_idempotent_commutative():
    both = list(enumerate_models(SG, 2, [ASSOC, COMM, IDEM]))
    # the two semilattice orders on two elements
    assert len(both) == 2
    for alg in both:
        assert is_idempotent(alg) and satisfies(alg, COMM)


def test_dump_load_roundtrip(tmp_path):
    fan = fan_semilattice()
    doc = dump_algebra(fan, join=None)
    path = tmp_path / "fan.json"
    path.write_text(__import__("json").dumps(doc))
    loaded, designations = load_algebra(path)
    assert loaded.carrier == fan.carrier
    assert all(loaded.apply("mul", (i, j)) == fan.apply("mul", (i, j))
               for i in range(3) for j in range(3))
    assert designations == {}


def test_load_rejects_bad_table():
    doc = {
        "signature": "signature SG op mul:2 end",
        "carrier": ["a", "b"],
        "ops": {"mul": [["a", "c"], ["b", "a"]]},
    }
    with pytest.raises(AlgebraError):
        load_algebra(doc)
