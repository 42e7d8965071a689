"""Generated subalgebras, subalgebra enumeration, the replica relation on
subsets (equal generated subalgebras), its quotient algebra, and reduced
subsets."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .algebra import AlgebraError, FiniteAlgebra, is_entropic, is_idempotent, units
from .power import PowerAlgebra, PowerVariant, complex_op
from .slo_laws import SloAlgebra, Violation, check_slo
from .terms import Signature, Term


class PreconditionError(AlgebraError):
    pass


def generated_subalgebra(base: FiniteAlgebra, subset: Iterable[int]) -> frozenset[int]:
    """Least superset of subset closed under all operations (fixpoint).

    The empty set is its own closure when the signature has no constants;
    constants always belong to every subalgebra.
    """
    current = set(subset)
    for sym, arity in base.sig.ops:
        if arity == 0 and current:
            current.add(base.apply(sym, ()))
    if not current:
        constants = [s for s, a in base.sig.ops if a == 0]
        if constants:
            current.update(base.apply(s, ()) for s in constants)
        else:
            return frozenset()
    changed = True
    while changed:
        changed = False
        snapshot = sorted(current)
        for sym, arity in base.sig.ops:
            if arity == 0:
                continue
            for combo in itertools.product(snapshot, repeat=arity):
                val = base.apply(sym, combo)
                if val not in current:
                    current.add(val)
                    changed = True
    return frozenset(current)


def _canonical_key(subset: frozenset[int]) -> tuple:
    return (len(subset), tuple(sorted(subset)))


def enumerate_subalgebras(base: FiniteAlgebra,
                          include_empty: bool = True) -> list[frozenset[int]]:
    """All closed subsets, ordered by (size, member order)."""
    n = base.size
    out = []
    start = 0 if include_empty else 1
    for mask in range(start, 1 << n):
        members = frozenset(i for i in range(n) if mask >> i & 1)
        if generated_subalgebra(base, members) == members:
            out.append(members)
    out.sort(key=_canonical_key)
    return out


def _require_idempotent_entropic(base: FiniteAlgebra) -> None:
    if not is_idempotent(base):
        raise PreconditionError("base algebra is not idempotent")
    if not is_entropic(base):
        raise PreconditionError("base algebra is not entropic")


def rho_equivalent(base: FiniteAlgebra, a: Iterable[int], b: Iterable[int]) -> bool:
    """Subsets are replica-equivalent iff they generate the same subalgebra."""
    _require_idempotent_entropic(base)
    return generated_subalgebra(base, a) == generated_subalgebra(base, b)


def _term_shapes(sig: Signature, depth: int) -> list[Term]:
    """Distinct term tree shapes up to the given depth, over fresh variables."""
    counter = itertools.count(1)

    def fresh() -> Term:
        return Term.var(f"x{next(counter)}")

    by_depth: list[list[Term]] = [[fresh()]]
    all_shapes: list[Term] = list(by_depth[0])
    for d in range(1, depth + 1):
        level = []
        prior = [t for lvl in by_depth for t in lvl]
        for sym, arity in sig.ops:
            if arity == 0:
                continue
            for combo in itertools.product(prior, repeat=arity):
                # at least one child of maximal depth so shapes are not repeated
                if any(c in by_depth[d - 1] for c in combo):
                    level.append(Term.app(sym, *combo))
        # rebuild with fresh variables so every shape is linear
        renamed = []
        for t in level:
            renamed.append(_refresh_vars(t, counter))
        by_depth.append(renamed)
        all_shapes.extend(renamed)
    return all_shapes


def _refresh_vars(t: Term, counter) -> Term:
    if t.is_var:
        return Term.var(f"x{next(counter)}")
    return Term.app(t.head, *(_refresh_vars(a, counter) for a in t.args))


def _shape_image(base: FiniteAlgebra, t: Term, subset: frozenset[int]) -> frozenset[int]:
    """Image t(S,...,S) with every variable occurrence ranging over S."""
    if t.is_var:
        return subset
    if not subset:
        return frozenset()
    child_images = [_shape_image(base, a, subset) for a in t.args]
    return complex_op(base, t.head, child_images)


def rho_witness(base: FiniteAlgebra, a: Iterable[int], b: Iterable[int],
                depth_bound: int = 3) -> tuple[Term, Term] | None:
    """Search for terms t, s with A <= t(B,...,B) and B <= s(A,...,A).

    Returns None when no witness exists within the depth bound (the bound may
    simply be too small)."""
    a = frozenset(a)
    b = frozenset(b)
    if not rho_equivalent(base, a, b):
        raise PreconditionError("subsets are not replica-equivalent")
    shapes = _term_shapes(base.sig, depth_bound)
    t_found = next((t for t in shapes if a <= _shape_image(base, t, b)), None)
    s_found = next((s for s in shapes if b <= _shape_image(base, s, a)), None)
    if t_found is None or s_found is None:
        return None
    return t_found, s_found


def quotient_label(base: FiniteAlgebra, members: frozenset[int], with_unit: bool) -> str:
    body = ",".join(base.carrier[i] for i in sorted(members))
    return f"⟨{body}⟩" + ("+1" if with_unit else "")


@dataclass(frozen=True)
class QuotientAlgebra:
    """The replica quotient: carrier elements are generated subalgebras.

    classes[i] is the full member set of carrier element i (including the base
    unit for with-unit-marked classes)."""

    slo: SloAlgebra
    base: FiniteAlgebra
    variant: PowerVariant
    classes: tuple[frozenset[int], ...]

    def class_index(self, subset: Iterable[int]) -> int:
        return self.classes.index(generated_subalgebra(self.base, subset))


def condition_one_check(base: FiniteAlgebra) -> bool:
    """No operation of positive arity reaches the unit from non-unit arguments."""
    base_units = units(base)
    if len(base_units) != 1:
        raise PreconditionError(f"expected a unique unit, found {len(base_units)}")
    (one,) = base_units
    for sym, arity in base.sig.ops:
        if arity == 0:
            continue
        for combo in itertools.product(base.elements(), repeat=arity):
            if base.apply(sym, combo) == one and any(c != one for c in combo):
                return False
    return True


def quotient_by_rho(power: PowerAlgebra,
                    variant: PowerVariant | None = None) -> QuotientAlgebra:
    """Quotient the power algebra by the replica relation.

    Operations act on class representatives through closures:
    omega(<A1>,...,<An>) = <omega(A1,...,An)> and <A> + <B> = <A u B>.
    Requires an idempotent entropic base; unit variants additionally require
    that only all-unit argument tuples produce the unit."""
    base = power.base
    variant = variant or power.variant
    _require_idempotent_entropic(base)
    unit_elem: int | None = None
    if variant.include_unit:
        if not condition_one_check(base):
            raise PreconditionError("base violates the unit-reachability condition")
        (unit_elem,) = units(base)

    class_sets = sorted(
        {generated_subalgebra(base, s) for s in power.subsets},
        key=_canonical_key)
    index = {c: i for i, c in enumerate(class_sets)}
    if unit_elem is not None:
        carrier = tuple(
            quotient_label(base, c - {unit_elem}, unit_elem in c) for c in class_sets)
    else:
        carrier = tuple(quotient_label(base, c, False) for c in class_sets)

    sig = power.alg.sig
    tables: dict[str, dict[tuple[int, ...], int]] = {}
    m = len(class_sets)
    for sym, arity in base.sig.ops:
        tables[sym] = {
            combo: index[generated_subalgebra(
                base, complex_op(base, sym, [class_sets[i] for i in combo]))]
            for combo in itertools.product(range(m), repeat=arity)}
    tables[power.join] = {
        (i, j): index[generated_subalgebra(base, class_sets[i] | class_sets[j])]
        for i in range(m) for j in range(m)}

    alg = FiniteAlgebra(sig, carrier, tables)
    zero = index[frozenset()] if variant.include_empty else None
    unit = index[frozenset({unit_elem})] if unit_elem is not None else None
    checked = check_slo(alg, power.join, zero, unit)
    if isinstance(checked, Violation):
        raise AlgebraError(f"replica quotient failed validation: {checked.to_json()}")
    if not is_idempotent(alg):
        raise AlgebraError("replica quotient is not idempotent")
    return QuotientAlgebra(checked, base, variant, tuple(class_sets))


def is_reduced(base: FiniteAlgebra, subset: Iterable[int]) -> bool:
    """No member is generated by the remaining members."""
    members = frozenset(subset)
    return all(
        a not in generated_subalgebra(base, members - {a})
        for a in members)


def reduced_subsets(base: FiniteAlgebra) -> list[frozenset[int]]:
    """All reduced subsets including the empty set, canonically ordered."""
    n = base.size
    out = [
        members
        for mask in range(1 << n)
        if is_reduced(base, members := frozenset(i for i in range(n) if mask >> i & 1))]
    out.sort(key=_canonical_key)
    return out
