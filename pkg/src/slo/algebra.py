"""Finite algebras as total operation tables, with term evaluation,
exhaustive identity checking, structural property detectors, and a
brute-force model enumerator."""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

from .terms import DslError, Identity, Signature, Term, parse_signature


class AlgebraError(ValueError):
    pass


class ResourceCapExceeded(RuntimeError):
    pass


def _max_tables_cap() -> int:
    return int(os.environ.get("SLO_MAX_TABLES", 10_000_000))


@dataclass(frozen=True)
class FiniteAlgebra:
    """Indexed carrier with one total table per operation symbol.

    Elements are carrier indices 0..n-1 internally; carrier entries are the
    external labels.  Tables map argument index tuples to result indices; a
    0-ary symbol is a single entry keyed by the empty tuple.
    """

    sig: Signature
    carrier: tuple[str, ...]
    tables: Mapping[str, Mapping[tuple[int, ...], int]]

    def __post_init__(self):
        n = len(self.carrier)
        if len(set(self.carrier)) != n:
            raise AlgebraError("duplicate carrier labels")
        constants = [s for s, a in self.sig.ops if a == 0]
        if n == 0 and constants:
            raise AlgebraError("empty algebra not permitted with constants in the signature")
        for sym, arity in self.sig.ops:
            table = self.tables.get(sym)
            if table is None:
                raise AlgebraError(f"missing table for {sym!r}")
            if n == 0:
                if table:
                    raise AlgebraError(f"non-empty table for {sym!r} on empty carrier")
                continue
            if len(table) != n ** arity:
                raise AlgebraError(f"table for {sym!r} is not total")
            for key, val in table.items():
                if len(key) != arity or any(not 0 <= k < n for k in key) or not 0 <= val < n:
                    raise AlgebraError(f"bad table entry for {sym!r}: {key} -> {val}")

    @property
    def size(self) -> int:
        return len(self.carrier)

    def index(self, label: str) -> int:
        try:
            return self.carrier.index(label)
        except ValueError:
            raise AlgebraError(f"unknown element label {label!r}") from None

    def apply(self, sym: str, args: tuple[int, ...]) -> int:
        return self.tables[sym][args]

    def elements(self) -> range:
        return range(len(self.carrier))


def eval_term(alg: FiniteAlgebra, t: Term, env: Mapping[str, int]) -> int:
    """Value of t under the assignment env (variable name -> carrier index)."""
    if t.is_var:
        if t.head not in env:
            raise AlgebraError(f"unbound variable {t.head!r}")
        return env[t.head]
    if not alg.sig.has(t.head):
        raise AlgebraError(f"symbol {t.head!r} not in the algebra's signature")
    return alg.apply(t.head, tuple(eval_term(alg, a, env) for a in t.args))


@dataclass(frozen=True)
class SatResult:
    holds: bool
    witness: dict[str, int] | None = None

    def __bool__(self) -> bool:
        return self.holds

    def witness_labels(self, alg: FiniteAlgebra) -> dict[str, str] | None:
        if self.witness is None:
            return None
        return {v: alg.carrier[i] for v, i in self.witness.items()}


def satisfies(alg: FiniteAlgebra, ident: Identity) -> SatResult:
    """Exhaustive check of lhs = rhs under every variable assignment."""
    variables = sorted(ident.var_set())
    for values in itertools.product(alg.elements(), repeat=len(variables)):
        env = dict(zip(variables, values))
        if eval_term(alg, ident.lhs, env) != eval_term(alg, ident.rhs, env):
            return SatResult(False, env)
    return SatResult(True)


def is_idempotent(alg: FiniteAlgebra) -> bool:
    """omega(x,...,x) = x for every operation of positive arity."""
    return all(
        alg.apply(sym, (x,) * arity) == x
        for sym, arity in alg.sig.ops if arity >= 1
        for x in alg.elements())


def is_entropic(alg: FiniteAlgebra) -> bool:
    """Any two operations commute over all argument matrices."""
    positive = [(s, a) for s, a in alg.sig.ops if a >= 1]
    for om, m in positive:
        for ph, n in positive:
            for matrix in itertools.product(alg.elements(), repeat=m * n):
                # matrix[i * m + j] is row i (of n), column j (of m)
                cols = [alg.apply(ph, tuple(matrix[i * m + j] for i in range(n)))
                        for j in range(m)]
                rows = [alg.apply(om, tuple(matrix[i * m + j] for j in range(m)))
                        for i in range(n)]
                if alg.apply(om, tuple(cols)) != alg.apply(ph, tuple(rows)):
                    return False
    return True


def is_symmetric(alg: FiniteAlgebra) -> bool:
    """Every operation is invariant under all argument permutations."""
    for sym, arity in alg.sig.ops:
        if arity < 2:
            continue
        for args in itertools.product(alg.elements(), repeat=arity):
            base = alg.apply(sym, args)
            for perm in itertools.permutations(args):
                if alg.apply(sym, perm) != base:
                    return False
    return True


def is_conservative(alg: FiniteAlgebra) -> bool:
    """Every operation value lies among its arguments."""
    return all(
        alg.apply(sym, args) in args
        for sym, arity in alg.sig.ops if arity >= 1
        for args in itertools.product(alg.elements(), repeat=arity))


def units(alg: FiniteAlgebra) -> frozenset[int]:
    """All elements acting as a unit in every slot of every positive-arity op."""
    found = []
    positive = [(s, a) for s, a in alg.sig.ops if a >= 1]
    for cand in alg.elements():
        ok = True
        for sym, arity in positive:
            for slot in range(arity):
                for x in alg.elements():
                    args = tuple(x if i == slot else cand for i in range(arity))
                    if alg.apply(sym, args) != x:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            found.append(cand)
    return frozenset(found)


def enumerate_models(
    sig: Signature,
    size: int,
    constraints: Sequence[Identity] = (),
    max_tables: int | None = None,
) -> Iterator[FiniteAlgebra]:
    """All operation-table assignments of the given size satisfying the
    constraints, in deterministic order.  No isomorphism reduction."""
    if size < 1:
        raise AlgebraError("size must be >= 1")
    cap = max_tables if max_tables is not None else _max_tables_cap()
    total = 1
    for _, arity in sig.ops:
        total *= size ** (size ** arity)
    if total > cap:
        raise ResourceCapExceeded(
            f"{total} candidate tables exceeds cap {cap}; raise SLO_MAX_TABLES to override")
    carrier = tuple(f"e{i}" for i in range(size))
    keyspaces = {
        sym: list(itertools.product(range(size), repeat=arity))
        for sym, arity in sig.ops}
    per_symbol = [
        [dict(zip(keyspaces[sym], values))
         for values in itertools.product(range(size), repeat=len(keyspaces[sym]))]
        for sym, _ in sig.ops]
    for combo in itertools.product(*per_symbol):
        alg = FiniteAlgebra(sig, carrier, dict(zip(sig.symbols, combo)))
        if all(satisfies(alg, c) for c in constraints):
            yield alg


# --- catalog constructors -------------------------------------------------

_MUL_SIG = Signature("SG", (("mul", 2),))


def _binary(carrier: Sequence[str], fn) -> FiniteAlgebra:
    n = len(carrier)
    table = {(a, b): fn(a, b) for a in range(n) for b in range(n)}
    return FiniteAlgebra(_MUL_SIG, tuple(carrier), {"mul": table})


def chain_semilattice(n: int) -> FiniteAlgebra:
    """Meet semilattice on the chain 0 < 1 < ... < n-1 (top is the unit)."""
    return _binary([str(i) for i in range(n)], min)


def fan_semilattice() -> FiniteAlgebra:
    """Three-element meet semilattice 0 < a, 0 < b with a, b incomparable."""
    return _binary(["0", "a", "b"], lambda a, b: a if a == b else 0)


def left_zero(n: int) -> FiniteAlgebra:
    """Left-zero semigroup: x * y = x."""
    return _binary([f"l{i}" for i in range(n)], lambda a, b: a)


def two_element_distributive_lattice() -> FiniteAlgebra:
    """Carrier {0,1} with mul = meet and add = join."""
    sig = Signature("DL", (("mul", 2), ("add", 2)), join_symbol="add")
    pairs = [(a, b) for a in range(2) for b in range(2)]
    return FiniteAlgebra(sig, ("0", "1"), {
        "mul": {(a, b): min(a, b) for a, b in pairs},
        "add": {(a, b): max(a, b) for a, b in pairs},
    })


def catalog(max_size: int = 4) -> list[FiniteAlgebra]:
    algs = [
        chain_semilattice(2), chain_semilattice(3), chain_semilattice(4),
        fan_semilattice(), left_zero(2), left_zero(3),
        two_element_distributive_lattice(),
    ]
    return [a for a in algs if a.size <= max_size]


# --- file format ----------------------------------------------------------

def _nested_table(alg: FiniteAlgebra, sym: str, arity: int):
    if arity == 0:
        return alg.carrier[alg.apply(sym, ())]

    def build(prefix: tuple[int, ...]):
        if len(prefix) == arity:
            return alg.carrier[alg.apply(sym, prefix)]
        return [build(prefix + (i,)) for i in alg.elements()]

    return build(())


def dump_algebra(alg: FiniteAlgebra, join: str | None = None,
                 zero: str | None = None, unit: str | None = None) -> dict:
    doc = {
        "signature": alg.sig.to_dsl(),
        "carrier": list(alg.carrier),
        "ops": {sym: _nested_table(alg, sym, arity) for sym, arity in alg.sig.ops},
    }
    if join is not None:
        doc["join"] = join
    if zero is not None:
        doc["zero"] = zero
    if unit is not None:
        doc["unit"] = unit
    return doc


def _table_depth(node) -> int:
    depth = 0
    while isinstance(node, list):
        if not node:
            raise AlgebraError("empty table row")
        depth += 1
        node = node[0]
    return depth


def load_algebra(doc: dict | str | Path) -> tuple[FiniteAlgebra, dict]:
    """Load the JSON algebra format; returns (algebra, designations).

    Designations is a dict with optional keys join/zero/unit (labels or symbol
    names as given in the file).
    """
    if isinstance(doc, (str, Path)):
        doc = json.loads(Path(doc).read_text())
    carrier = tuple(doc["carrier"])
    sig_field = doc["signature"]
    if isinstance(sig_field, str) and sig_field.strip().startswith("signature"):
        sig = parse_signature(sig_field)
    else:
        # bare name: infer arities from table nesting
        ops = tuple((sym, _table_depth(node)) for sym, node in doc["ops"].items())
        sig = Signature(str(sig_field), ops, join_symbol=doc.get("join"))
    index = {label: i for i, label in enumerate(carrier)}

    def flatten(sym: str, arity: int, node, prefix: tuple[int, ...], out: dict):
        if len(prefix) == arity:
            if not isinstance(node, str):
                raise AlgebraError(f"table for {sym!r} nested too deep")
            if node not in index:
                raise AlgebraError(
                    f"table for {sym!r} mentions unknown element {node!r}")
            out[prefix] = index[node]
            return
        if not isinstance(node, list) or len(node) != len(carrier):
            raise AlgebraError(f"table for {sym!r} has wrong shape")
        for i, sub in enumerate(node):
            flatten(sym, arity, sub, prefix + (i,), out)

    tables = {}
    for sym, arity in sig.ops:
        if sym not in doc["ops"]:
            raise AlgebraError(f"missing table for {sym!r}")
        flat: dict[tuple[int, ...], int] = {}
        flatten(sym, arity, doc["ops"][sym], (), flat)
        tables[sym] = flat
    designations = {k: doc[k] for k in ("join", "zero", "unit") if k in doc}
    return FiniteAlgebra(sig, carrier, tables), designations
