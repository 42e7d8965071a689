"""Semilattice-ordered algebra validation, natural order, full subreducts,
disjunctive forms, word-operation distributivity, and universal-property
homomorphism extensions from free models."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .algebra import AlgebraError, FiniteAlgebra, eval_term
from .terms import Term


@dataclass(frozen=True)
class Violation:
    """A falsified law with a concrete witnessing assignment."""

    law: str
    witness: dict[str, str]
    lhs: str
    rhs: str

    def to_json(self) -> str:
        return json.dumps({"law": self.law, "witness": self.witness,
                           "lhs": self.lhs, "rhs": self.rhs})

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class SloAlgebra:
    """A finite algebra with a designated join and optional zero/unit elements.

    Construct through check_slo so the semilattice, distributivity, zero and
    unit laws are verified.
    """

    alg: FiniteAlgebra
    join: str
    zero: int | None = None
    unit: int | None = None

    def __bool__(self) -> bool:
        return True

    @property
    def carrier(self) -> tuple[str, ...]:
        return self.alg.carrier

    def omega_ops(self) -> tuple[tuple[str, int], ...]:
        return tuple((s, a) for s, a in self.alg.sig.ops if s != self.join)

    def plus(self, a: int, b: int) -> int:
        return self.alg.apply(self.join, (a, b))

    def join_all(self, elems: Iterable[int]) -> int:
        it = iter(elems)
        try:
            acc = next(it)
        except StopIteration:
            if self.zero is None:
                raise AlgebraError("empty join in an algebra without zero") from None
            return self.zero
        for e in it:
            acc = self.plus(acc, e)
        return acc

    def leq(self, a: int, b: int) -> bool:
        return self.plus(a, b) == b


def check_slo(alg: FiniteAlgebra, join: str,
              zero: int | None = None, unit: int | None = None) -> SloAlgebra | Violation:
    """Validate the SLO laws; returns the algebra or the first violation found."""
    if not alg.sig.has(join) or alg.sig.arity(join) != 2:
        raise AlgebraError(f"join symbol {join!r} must be a binary operation")
    lab = alg.carrier

    def plus(a, b):
        return alg.apply(join, (a, b))

    for x in alg.elements():
        if plus(x, x) != x:
            return Violation("semilattice-idempotent", {"x": lab[x]},
                             lab[plus(x, x)], lab[x])
    for x, y in itertools.product(alg.elements(), repeat=2):
        if plus(x, y) != plus(y, x):
            return Violation("semilattice-commutative", {"x": lab[x], "y": lab[y]},
                             lab[plus(x, y)], lab[plus(y, x)])
    for x, y, z in itertools.product(alg.elements(), repeat=3):
        if plus(plus(x, y), z) != plus(x, plus(y, z)):
            return Violation("semilattice-associative",
                             {"x": lab[x], "y": lab[y], "z": lab[z]},
                             lab[plus(plus(x, y), z)], lab[plus(x, plus(y, z))])

    omega = [(s, a) for s, a in alg.sig.ops if s != join and a >= 1]
    for sym, arity in omega:
        for slot in range(arity):
            for fixed in itertools.product(alg.elements(), repeat=arity - 1):
                for x, y in itertools.product(alg.elements(), repeat=2):
                    args_sum = fixed[:slot] + (plus(x, y),) + fixed[slot:]
                    args_x = fixed[:slot] + (x,) + fixed[slot:]
                    args_y = fixed[:slot] + (y,) + fixed[slot:]
                    left = alg.apply(sym, args_sum)
                    right = plus(alg.apply(sym, args_x), alg.apply(sym, args_y))
                    if left != right:
                        witness = {f"x{i + 1}": lab[v] for i, v in enumerate(args_sum)}
                        witness.update({"x": lab[x], "y": lab[y], "op": sym,
                                        "slot": str(slot + 1)})
                        return Violation("distributivity", witness, lab[left], lab[right])

    if zero is not None:
        for x in alg.elements():
            if plus(zero, x) != x:
                return Violation("zero-least", {"x": lab[x]},
                                 lab[plus(zero, x)], lab[x])
        for sym, arity in omega:
            for slot in range(arity):
                for fixed in itertools.product(alg.elements(), repeat=arity - 1):
                    args = fixed[:slot] + (zero,) + fixed[slot:]
                    if alg.apply(sym, args) != zero:
                        witness = {f"x{i + 1}": lab[v] for i, v in enumerate(args)}
                        witness["op"] = sym
                        return Violation("zero-absorption", witness,
                                         lab[alg.apply(sym, args)], lab[zero])

    if unit is not None:
        for sym, arity in omega:
            for slot in range(arity):
                for x in alg.elements():
                    args = tuple(x if i == slot else unit for i in range(arity))
                    if alg.apply(sym, args) != x:
                        return Violation("unit", {"x": lab[x], "op": sym,
                                                  "slot": str(slot + 1)},
                                         lab[alg.apply(sym, args)], lab[x])

    return SloAlgebra(alg, join, zero, unit)


def natural_order(s: SloAlgebra) -> frozenset[tuple[int, int]]:
    """All pairs (a, b) with a <= b in the join order (a + b = b)."""
    return frozenset(
        (a, b)
        for a in s.alg.elements() for b in s.alg.elements()
        if s.leq(a, b))


def full_subreduct(s: SloAlgebra, generators: Iterable[int]) -> frozenset[int]:
    """Closure of the generators under the non-join operations, to fixpoint."""
    current = set(generators)
    omega = s.omega_ops()
    for sym, arity in omega:
        if arity == 0:
            current.add(s.alg.apply(sym, ()))
    changed = True
    while changed:
        changed = False
        snapshot = sorted(current)
        for sym, arity in omega:
            if arity == 0:
                continue
            for combo in itertools.product(snapshot, repeat=arity):
                val = s.alg.apply(sym, combo)
                if val not in current:
                    current.add(val)
                    changed = True
    return frozenset(current)


class NotGenerated(AlgebraError):
    """The given set does not generate the algebra; carries the best join reached."""

    def __init__(self, message: str, achieved: int | None):
        super().__init__(message)
        self.achieved = achieved


@dataclass(frozen=True)
class DisjunctiveForm:
    parts: tuple[int, ...]
    target: int


def disjunctive_form(s: SloAlgebra, generators: Iterable[int], r: int) -> DisjunctiveForm:
    """Express r as a join of full-subreduct elements.

    Returns the canonical maximal decomposition: the maximal subreduct
    elements below r.  Raises NotGenerated when the join of all subreduct
    elements below r falls short of r.
    """
    sub = full_subreduct(s, generators)
    below = sorted(u for u in sub if s.leq(u, r))
    if not below:
        if s.zero is not None and r == s.zero:
            return DisjunctiveForm((), r)
        raise NotGenerated(
            f"no subreduct element lies below {s.carrier[r]!r}", None)
    joined = s.join_all(below)
    if joined != r:
        raise NotGenerated(
            f"generators do not generate {s.carrier[r]!r}; "
            f"reached {s.carrier[joined]!r}", joined)
    maximal = tuple(
        u for u in below
        if not any(v != u and s.leq(u, v) for v in below))
    return DisjunctiveForm(maximal, r)


def word_op_distributes(s: SloAlgebra, t: Term) -> bool:
    """Exhaustive check that the derived operation of t distributes over join."""
    variables = t.distinct_vars()
    n = len(variables)
    if n == 0:
        return True
    elems = list(s.alg.elements())
    for slot in range(n):
        others = variables[:slot] + variables[slot + 1:]
        for fixed in itertools.product(elems, repeat=n - 1):
            env = dict(zip(others, fixed))
            for x, y in itertools.product(elems, repeat=2):
                env[variables[slot]] = s.plus(x, y)
                left = eval_term(s.alg, t, env)
                env[variables[slot]] = x
                vx = eval_term(s.alg, t, env)
                env[variables[slot]] = y
                vy = eval_term(s.alg, t, env)
                if left != s.plus(vx, vy):
                    return False
    return True


def idempotency_criterion(s: SloAlgebra, sym: str) -> bool:
    """x + y equals the join of sym over all argument patterns from {x, y}."""
    arity = s.alg.sig.arity(sym)
    if arity < 1:
        raise AlgebraError("criterion needs a positive-arity operation")
    for x, y in itertools.product(s.alg.elements(), repeat=2):
        acc = None
        for pattern in itertools.product((x, y), repeat=arity):
            v = s.alg.apply(sym, pattern)
            acc = v if acc is None else s.plus(acc, v)
        if acc != s.plus(x, y):
            return False
    return True


# --- homomorphism extension (universal property) ---------------------------

@dataclass(frozen=True)
class HomResult:
    mapping: tuple[int, ...]
    is_homomorphism: bool
    unique: bool
    failure: Violation | None = None


def _eval_decomposition_term(target: SloAlgebra, t: Term, env: Mapping[str, int],
                             free_unit_symbol: str | None) -> int:
    """Evaluate a generator term in the target; the free model's unit constant
    resolves to the target's designated unit when the symbol is absent there."""
    if t.is_var:
        if t.head not in env:
            raise AlgebraError(f"generator map is not total: missing {t.head!r}")
        return env[t.head]
    if not target.alg.sig.has(t.head):
        if t.head == free_unit_symbol and not t.args:
            if target.unit is None:
                raise AlgebraError("target has no unit but the free model requires one")
            return target.unit
        raise AlgebraError(f"target lacks operation {t.head!r}")
    return target.alg.apply(
        t.head, tuple(_eval_decomposition_term(target, a, env, free_unit_symbol)
                      for a in t.args))


def extend_hom(free, h: Mapping[str, int], target: SloAlgebra) -> HomResult:
    """Extend a generator map to the whole free model via its decompositions.

    free must be a FreeModel (see slo.free): each carrier element carries its
    disjunctive-form parts as terms over the generators.  The image of an
    element is the join of the evaluated parts; an empty decomposition maps to
    the target's zero.
    """
    for gen in free.generators:
        if gen not in h:
            raise AlgebraError(f"generator map is not total: missing {gen!r}")
    if free.slo.zero is not None and target.zero is None:
        raise AlgebraError("free model has a zero but the target does not")
    if free.slo.unit is not None and target.unit is None:
        raise AlgebraError("free model has a unit but the target does not")

    unit_sym = free.slo.alg.sig.unit_symbol
    mapping = []
    for parts in free.decomposition:
        values = [_eval_decomposition_term(target, t, h, unit_sym) for t in parts]
        mapping.append(target.join_all(values))
    mapping = tuple(mapping)

    failure = _verify_hom(free.slo, target, mapping)
    unique = failure is None and _unique_on_generated(free, h, target, mapping)
    return HomResult(mapping, failure is None, unique, failure)


def _verify_hom(source: SloAlgebra, target: SloAlgebra,
                mapping: Sequence[int]) -> Violation | None:
    lab = source.carrier
    tlab = target.carrier
    for sym, arity in source.omega_ops():
        if not target.alg.sig.has(sym):
            if sym == source.alg.sig.unit_symbol and arity == 0:
                src = source.alg.apply(sym, ())
                if mapping[src] != target.unit:
                    return Violation("hom-unit-constant", {"elem": lab[src]},
                                     tlab[mapping[src]], tlab[target.unit])
                continue
            return Violation("hom-missing-op", {"op": sym}, "", "")
        for combo in itertools.product(source.alg.elements(), repeat=arity):
            lhs = mapping[source.alg.apply(sym, combo)]
            rhs = target.alg.apply(sym, tuple(mapping[i] for i in combo))
            if lhs != rhs:
                witness = {f"x{i + 1}": lab[v] for i, v in enumerate(combo)}
                witness["op"] = sym
                return Violation("hom-omega", witness, tlab[lhs], tlab[rhs])
    for a, b in itertools.product(source.alg.elements(), repeat=2):
        lhs = mapping[source.plus(a, b)]
        rhs = target.plus(mapping[a], mapping[b])
        if lhs != rhs:
            return Violation("hom-join", {"x": lab[a], "y": lab[b]},
                             tlab[lhs], tlab[rhs])
    if source.zero is not None and mapping[source.zero] != target.zero:
        return Violation("hom-zero", {}, tlab[mapping[source.zero]], tlab[target.zero])
    if source.unit is not None and mapping[source.unit] != target.unit:
        return Violation("hom-unit", {}, tlab[mapping[source.unit]], tlab[target.unit])
    return None


def _unique_on_generated(free, h: Mapping[str, int], target: SloAlgebra,
                         mapping: Sequence[int]) -> bool:
    """Any homomorphism agreeing with h on the generators is forced to agree
    with the extension on the subalgebra they generate.

    Values are propagated from the generators through every operation; the
    propagation is deterministic, so agreement on the reached part implies
    uniqueness there.  The generators must generate the free model, in which
    case the whole map is pinned down.
    """
    source = free.slo
    known: dict[int, int] = {free.generators[g]: h[g] for g in free.generators}
    if source.zero is not None:
        known.setdefault(source.zero, target.zero)
    if source.unit is not None:
        known.setdefault(source.unit, target.unit)
    ops = list(source.alg.sig.ops)  # includes the join
    changed = True
    while changed:
        changed = False
        snapshot = sorted(known)
        for sym, arity in ops:
            target_sym = sym if target.alg.sig.has(sym) else None
            for combo in itertools.product(snapshot, repeat=arity):
                src = source.alg.apply(sym, combo)
                if sym == source.join:
                    val = target.plus(known[combo[0]], known[combo[1]])
                elif target_sym is None:
                    if sym == source.alg.sig.unit_symbol and arity == 0:
                        val = target.unit
                    else:
                        return False
                else:
                    val = target.alg.apply(target_sym, tuple(known[i] for i in combo))
                if src in known:
                    if known[src] != val:
                        return False
                else:
                    known[src] = val
                    changed = True
    if len(known) != len(source.carrier):
        return False  # generators do not generate; uniqueness not established
    return all(known[i] == mapping[i] for i in source.alg.elements())


def enumerate_homomorphisms(source: SloAlgebra, target: SloAlgebra,
                            fixed: Mapping[int, int] | None = None,
                            limit: int = 2_000_000) -> list[tuple[int, ...]]:
    """Brute-force enumeration of all homomorphisms, for desk-scale uniqueness
    cross-checks.  Refuses when the search space exceeds the limit."""
    n = len(source.carrier)
    m = len(target.carrier)
    if m ** n > limit:
        raise AlgebraError(f"{m}^{n} candidate maps exceeds limit {limit}")
    fixed = dict(fixed or {})
    out = []
    for values in itertools.product(range(m), repeat=n):
        if any(values[i] != v for i, v in fixed.items()):
            continue
        if _verify_hom(source, target, values) is None:
            out.append(values)
    return out
