"""Complex (pointwise) operations on subsets and the four power-algebra
variants: non-empty, empty-extended, with-unit, and both."""

from __future__ import annotations

import enum
import itertools
import os
from dataclasses import dataclass
from typing import Iterable, Mapping

from .algebra import AlgebraError, FiniteAlgebra, eval_term, units
from .terms import Signature, Term, is_linear, linearize

JOIN_SYMBOL = "union"


class PowerVariant(enum.Enum):
    NONEMPTY = "nonempty"
    WITH_EMPTY = "with_empty"
    WITH_UNIT = "with_unit"
    WITH_EMPTY_AND_UNIT = "with_empty_and_unit"

    @property
    def include_empty(self) -> bool:
        return self in (PowerVariant.WITH_EMPTY, PowerVariant.WITH_EMPTY_AND_UNIT)

    @property
    def include_unit(self) -> bool:
        return self in (PowerVariant.WITH_UNIT, PowerVariant.WITH_EMPTY_AND_UNIT)


def subset_label(base: FiniteAlgebra, subset: frozenset[int]) -> str:
    return "{" + ",".join(base.carrier[i] for i in sorted(subset)) + "}"


def _check_args(base: FiniteAlgebra, sym: str, args) -> None:
    if not base.sig.has(sym):
        raise AlgebraError(f"symbol {sym!r} not in the base signature")
    if len(args) != base.sig.arity(sym):
        raise AlgebraError(
            f"{sym!r} expects {base.sig.arity(sym)} arguments, got {len(args)}")
    for a in args:
        for x in a:
            if not 0 <= x < base.size:
                raise AlgebraError(f"foreign element {x} in subset argument")


def complex_op(base: FiniteAlgebra, sym: str, args: Iterable[frozenset[int]]) -> frozenset[int]:
    """Pointwise image set; empty if any argument is empty."""
    args = [frozenset(a) for a in args]
    _check_args(base, sym, args)
    if any(not a for a in args):
        return frozenset()
    return frozenset(base.apply(sym, combo) for combo in itertools.product(*args))


def complex_linear_term(base: FiniteAlgebra, t: Term,
                        env: Mapping[str, frozenset[int]]) -> frozenset[int]:
    """Pointwise image of a linear derived operation."""
    if not is_linear(t):
        raise AlgebraError(
            "term is not linear; linearize it and evaluate in the power algebra instead")
    return _pointwise(base, t, env)


def _pointwise(base: FiniteAlgebra, t: Term,
               env: Mapping[str, frozenset[int]]) -> frozenset[int]:
    variables = t.distinct_vars()
    for v in variables:
        if v not in env:
            raise AlgebraError(f"unbound variable {v!r}")
    sets = [env[v] for v in variables]
    if any(not s for s in sets):
        return frozenset()
    out = set()
    for combo in itertools.product(*sets):
        out.add(eval_term(base, t, dict(zip(variables, combo))))
    return frozenset(out)


@dataclass(frozen=True)
class InclusionReport:
    pointwise: frozenset[int]
    lifted: frozenset[int]
    contained: bool
    proper: bool


def nonlinear_inclusion_check(base: FiniteAlgebra, t: Term,
                              env: Mapping[str, frozenset[int]]) -> InclusionReport:
    """Compare the pointwise image of t with its power-algebra evaluation.

    The power evaluation interprets each variable occurrence independently:
    linearize t and feed every fresh copy of a variable the same subset.
    """
    pointwise = _pointwise(base, t, env)
    lin = linearize(t)
    lifted_env = {fresh: env[orig] for fresh, orig in lin.identification.items()}
    lifted = _pointwise(base, lin.linear_term, lifted_env)
    contained = pointwise <= lifted
    return InclusionReport(pointwise, lifted, contained, contained and pointwise != lifted)


@dataclass(frozen=True)
class PowerAlgebra:
    """A power algebra materialized as a finite algebra over subset labels.

    The signature is the base signature extended with a binary join symbol
    (set union); subsets[i] is the member set of carrier element i.
    """

    alg: FiniteAlgebra
    base: FiniteAlgebra
    variant: PowerVariant
    subsets: tuple[frozenset[int], ...]
    join: str
    zero: int | None
    unit: int | None

    def subset_index(self, subset: frozenset[int]) -> int:
        return self.subsets.index(frozenset(subset))


def _max_power_base() -> int:
    return int(os.environ.get("SLO_MAX_SUBSETS", 12))


def build_power(base: FiniteAlgebra, variant: PowerVariant,
                join_symbol: str = JOIN_SYMBOL) -> PowerAlgebra:
    """Materialize the power algebra of a finite base with union as join.

    Carrier order is binary counting over the base order (empty set first when
    present).  Refuses bases above the SLO_MAX_SUBSETS cap rather than degrade.
    """
    n = base.size
    if n > _max_power_base():
        raise AlgebraError(
            f"base size {n} exceeds power cap {_max_power_base()} (SLO_MAX_SUBSETS)")
    if base.sig.has(join_symbol):
        raise AlgebraError(f"join symbol {join_symbol!r} clashes with a base operation")
    unit_elem: int | None = None
    if variant.include_unit:
        base_units = units(base)
        if len(base_units) != 1:
            raise AlgebraError(
                f"variant {variant.value} requires a unique unit; found {len(base_units)}")
        (unit_elem,) = base_units

    start = 0 if variant.include_empty else 1
    subsets = tuple(
        frozenset(i for i in range(n) if mask >> i & 1)
        for mask in range(start, 1 << n))
    index = {s: i for i, s in enumerate(subsets)}
    carrier = tuple(subset_label(base, s) for s in subsets)

    sig = Signature(
        f"P({base.sig.name})",
        base.sig.ops + ((join_symbol, 2),),
        join_symbol=join_symbol,
        zero_symbol=base.sig.zero_symbol,
        unit_symbol=base.sig.unit_symbol,
    )
    tables: dict[str, dict[tuple[int, ...], int]] = {}
    m = len(subsets)
    for sym, arity in base.sig.ops:
        table = {}
        for combo in itertools.product(range(m), repeat=arity):
            table[combo] = index[complex_op(base, sym, [subsets[i] for i in combo])]
        tables[sym] = table
    tables[join_symbol] = {
        (i, j): index[subsets[i] | subsets[j]]
        for i in range(m) for j in range(m)}

    alg = FiniteAlgebra(sig, carrier, tables)
    zero = index[frozenset()] if variant.include_empty else None
    unit = index[frozenset({unit_elem})] if unit_elem is not None else None
    return PowerAlgebra(alg, base, variant, subsets, join_symbol, zero, unit)
