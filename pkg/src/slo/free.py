"""Exact finite free objects: free semilattices (with and without unit), the
free power constructions, the free commutative doubly-idempotent semiring
with constants, cardinality reports, and an oracle-gated free normal band."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Iterable, Mapping, Sequence

from .algebra import AlgebraError, FiniteAlgebra, satisfies, units
from .closure import (
    PreconditionError,
    enumerate_subalgebras,
    generated_subalgebra,
    quotient_label,
    reduced_subsets,
)
from .power import PowerAlgebra, PowerVariant, build_power, complex_op
from .slo_laws import SloAlgebra, Violation, check_slo
from .terms import Identity, Signature, Term

SL_SIG = Signature("SL", (("mul", 2),))
CDIS_SIG = Signature(
    "CDIS", (("mul", 2), ("add", 2), ("one", 0)),
    join_symbol="add", unit_symbol="one")


@dataclass(frozen=True)
class FreeModel:
    """A free SLO model: the validated algebra, its generators, and a
    disjunctive-form decomposition (terms over generators) per element."""

    slo: SloAlgebra
    generators: dict[str, int]
    decomposition: tuple[tuple[Term, ...], ...]


def _subset_sort_key(members: frozenset[int]) -> tuple:
    return (len(members), tuple(sorted(members)))


def _sl_label(gens: Sequence[str], members: frozenset[int]) -> str:
    parts = [gens[i] for i in sorted(members)]
    sep = "" if all(len(p) == 1 for p in parts) else "."
    return sep.join(parts)


def free_semilattice(gens: Sequence[str]) -> FiniteAlgebra:
    """Free semilattice: non-empty subsets of the generators under union."""
    if len(set(gens)) != len(gens):
        raise AlgebraError("duplicate generator labels")
    if not gens:
        raise AlgebraError("free_semilattice needs at least one generator; "
                           "use free_semilattice_unit for the empty case")
    n = len(gens)
    members = sorted(
        (frozenset(i for i in range(n) if mask >> i & 1) for mask in range(1, 1 << n)),
        key=_subset_sort_key)
    index = {m: i for i, m in enumerate(members)}
    carrier = tuple(_sl_label(gens, m) for m in members)
    table = {
        (i, j): index[members[i] | members[j]]
        for i in range(len(members)) for j in range(len(members))}
    return FiniteAlgebra(SL_SIG, carrier, {"mul": table})


SL1_SIG = Signature("SL1", (("mul", 2), ("one", 0)), unit_symbol="one")


def free_semilattice_unit(gens: Sequence[str], unit_as_symbol: bool = False) -> FiniteAlgebra:
    """Free semilattice with a fresh unit element adjoined.

    By default the unit is a designated element only (no constant symbol), so
    subalgebra closures never pick it up; with unit_as_symbol the signature
    carries an explicit 0-ary unit operation, which the power constructions
    need in order to name the unit in decomposition terms.
    """
    if "1" in gens:
        raise AlgebraError("generator label '1' is reserved for the unit")
    if not gens:
        carrier: tuple[str, ...] = ("1",)
        table = {(0, 0): 0}
    else:
        base = free_semilattice(gens)
        n = base.size
        carrier = base.carrier + ("1",)
        table = dict(base.tables["mul"])
        for i in range(n + 1):
            table[(i, n)] = i
            table[(n, i)] = i
    if unit_as_symbol:
        return FiniteAlgebra(SL1_SIG, carrier,
                             {"mul": table, "one": {(): len(carrier) - 1}})
    return FiniteAlgebra(SL_SIG, carrier, {"mul": table})


def element_terms(base: FiniteAlgebra, generators: Mapping[str, int]) -> dict[int, Term]:
    """A term over the generators for every reachable element (breadth-first,
    deterministic; the first term found per element is kept)."""
    terms: dict[int, Term] = {}
    for sym, arity in base.sig.ops:
        if arity == 0:
            terms[base.apply(sym, ())] = Term.app(sym)
    for name, idx in sorted(generators.items()):
        terms.setdefault(idx, Term.var(name))
    changed = True
    while changed:
        changed = False
        snapshot = sorted(terms)
        for sym, arity in base.sig.ops:
            if arity == 0:
                continue
            for combo in itertools.product(snapshot, repeat=arity):
                val = base.apply(sym, combo)
                if val not in terms:
                    terms[val] = Term.app(sym, *(terms[i] for i in combo))
                    changed = True
    return terms


@dataclass(frozen=True)
class FreePower:
    """The power construction of a free base algebra, with the variety
    membership verdict: when the power satisfies the base identities it is
    itself free, otherwise only the universality carrier."""

    model: FreeModel
    power: PowerAlgebra
    in_variety: bool
    witness: Identity | None
    witness_env: dict[str, str] | None


def free_power_model(base_free: FiniteAlgebra, gens: Sequence[str],
                     variant: PowerVariant = PowerVariant.NONEMPTY,
                     variety_identities: Sequence[Identity] = ()) -> FreePower:
    """Power algebra of a finite free base with singleton generators.

    Flags whether the result still satisfies the given base-variety
    identities; a false flag comes with a witnessing identity and assignment.
    """
    power = build_power(base_free, variant)
    gen_elems = {g: base_free.index(g) for g in gens}
    base_terms = element_terms(base_free, gen_elems)
    missing = [base_free.carrier[i] for i in base_free.elements() if i not in base_terms]
    if missing:
        raise AlgebraError(f"generators do not generate the base: missing {missing}")
    decomposition = tuple(
        tuple(base_terms[i] for i in sorted(subset))
        for subset in power.subsets)
    slo = check_slo(power.alg, power.join, power.zero, power.unit)
    if isinstance(slo, Violation):
        raise AlgebraError(f"power algebra failed SLO validation: {slo.to_json()}")
    generators = {g: power.subset_index(frozenset({e})) for g, e in gen_elems.items()}
    model = FreeModel(slo, generators, decomposition)

    in_variety = True
    witness = None
    witness_env = None
    for ident in variety_identities:
        res = satisfies(power.alg, ident)
        if not res:
            in_variety = False
            witness = ident
            witness_env = res.witness_labels(power.alg)
            break
    return FreePower(model, power, in_variety, witness, witness_env)


def free_slo_nonempty(base_free: FiniteAlgebra, gens: Sequence[str],
                      variety_identities: Sequence[Identity] = ()) -> FreePower:
    return free_power_model(base_free, gens, PowerVariant.NONEMPTY, variety_identities)


def cdis_chain(n: int) -> SloAlgebra:
    """Chain CDIS target: mul = min, add = max, zero = bottom, unit = top."""
    if n < 2:
        raise AlgebraError("chain target needs at least two elements")
    sig = Signature("CDIS-chain", (("mul", 2), ("add", 2)), join_symbol="add")
    pairs = [(a, b) for a in range(n) for b in range(n)]
    alg = FiniteAlgebra(sig, tuple(str(i) for i in range(n)), {
        "mul": {(a, b): min(a, b) for a, b in pairs},
        "add": {(a, b): max(a, b) for a, b in pairs},
    })
    checked = check_slo(alg, "add", zero=0, unit=n - 1)
    assert isinstance(checked, SloAlgebra)
    return checked


def dissemilattice_chain(n: int) -> SloAlgebra:
    """Chain dissemilattice without designated constants."""
    full = cdis_chain(n)
    return SloAlgebra(full.alg, full.join, None, None)


def free_cdis(gens: Sequence[str]) -> FreeModel:
    """Free commutative doubly-idempotent semiring with constants 0 and 1.

    Carrier: pairs (C, marked) where C ranges over the subalgebras of the
    free semilattice on the generators (including the empty one) and the mark
    records whether the class contains the multiplicative unit.  The zero is
    the unmarked empty class; the unit is the marked empty class.
    """
    if len(set(gens)) != len(gens):
        raise AlgebraError("duplicate generator labels")
    if gens:
        base = free_semilattice(gens)
    else:
        base = FiniteAlgebra(SL_SIG, (), {"mul": {}})
    subs = enumerate_subalgebras(base, include_empty=True)
    elems = sorted(
        ((c, marked) for c in subs for marked in (False, True)),
        key=lambda e: (_subset_sort_key(e[0]), e[1]))
    index = {e: i for i, e in enumerate(elems)}
    carrier = tuple(quotient_label(base, c, marked) for c, marked in elems)

    def close(s: frozenset[int]) -> frozenset[int]:
        return generated_subalgebra(base, s)

    m = len(elems)
    mul_table = {}
    add_table = {}
    for i, (c, f) in enumerate(elems):
        for j, (d, g) in enumerate(elems):
            prod = set(complex_op(base, "mul", [c, d]))
            if g:
                prod |= c
            if f:
                prod |= d
            mul_table[(i, j)] = index[(close(frozenset(prod)), f and g)]
            add_table[(i, j)] = index[(close(c | d), f or g)]
    one_idx = index[(frozenset(), True)]
    zero_idx = index[(frozenset(), False)]
    alg = FiniteAlgebra(CDIS_SIG, carrier, {
        "mul": mul_table, "add": add_table, "one": {(): one_idx}})

    gen_elems = {g: base.index(g) for g in gens}
    base_terms = element_terms(base, gen_elems)
    decomposition = []
    for c, marked in elems:
        parts = [base_terms[i] for i in sorted(c)]
        if marked:
            parts.append(Term.app("one"))
        decomposition.append(tuple(parts))

    slo = check_slo(alg, "add", zero_idx, one_idx)
    if isinstance(slo, Violation):
        raise AlgebraError(f"free CDIS failed SLO validation: {slo.to_json()}")
    generators = {g: index[(frozenset({e}), False)] for g, e in gen_elems.items()}
    return FreeModel(slo, generators, tuple(decomposition))


def dump_free_model(fm: FreeModel) -> dict:
    from .algebra import dump_algebra

    slo = fm.slo
    doc = dump_algebra(
        slo.alg, join=slo.join,
        zero=None if slo.zero is None else slo.alg.carrier[slo.zero],
        unit=None if slo.unit is None else slo.alg.carrier[slo.unit])
    doc["generators"] = {g: slo.alg.carrier[i] for g, i in fm.generators.items()}
    doc["decomposition"] = {
        slo.alg.carrier[i]: [str(t) for t in parts]
        for i, parts in enumerate(fm.decomposition)}
    return doc


def load_free_model(doc: dict) -> FreeModel:
    from .algebra import load_algebra
    from .terms import parse_term

    alg, desig = load_algebra(doc)
    join = desig.get("join")
    if join is None:
        raise AlgebraError("free model file lacks a join designation")
    zero = None if "zero" not in desig else alg.index(desig["zero"])
    unit = None if "unit" not in desig else alg.index(desig["unit"])
    slo = check_slo(alg, join, zero, unit)
    if isinstance(slo, Violation):
        raise AlgebraError(f"free model file fails SLO laws: {slo.to_json()}")
    generators = {g: alg.index(label) for g, label in doc["generators"].items()}
    decomposition = tuple(
        tuple(parse_term(s, alg.sig) for s in doc["decomposition"][label])
        for label in alg.carrier)
    return FreeModel(slo, generators, decomposition)


DEFAULT_GENERATOR_POOL = ("x", "y", "z", "w")


def generator_labels(n: int) -> tuple[str, ...]:
    if n <= len(DEFAULT_GENERATOR_POOL):
        return DEFAULT_GENERATOR_POOL[:n]
    return tuple(f"x{i + 1}" for i in range(n))


def cardinality_report(n: int, cap: int = 4) -> dict[str, int]:
    """Element counts for the free constructions on n generators, with the
    doubling and double-exponential-bound identities asserted."""
    if n < 0:
        raise AlgebraError("generator count must be >= 0")
    if n > cap:
        raise AlgebraError(f"generator count {n} exceeds cap {cap}")
    gens = generator_labels(n)
    if n:
        base = free_semilattice(gens)
    else:
        base = FiniteAlgebra(SL_SIG, (), {"mul": {}})
    n_sl = base.size
    n_subs = len(enumerate_subalgebras(base, include_empty=True))
    n_reduced = len(reduced_subsets(base))
    n_cdis = len(free_cdis(gens).slo.carrier)
    bound = 2 ** (2 ** n)
    report = {
        "n_free_sl_elements": n_sl,
        "n_subalgebras_incl_empty": n_subs,
        "n_reduced_subsets": n_reduced,
        "n_free_cdis": n_cdis,
        "bound_2_2n": bound,
    }
    if n_cdis != 2 * n_subs or n_cdis != 2 * n_reduced:
        raise AlgebraError(f"cardinality identities violated: {report}")
    if n_cdis > bound:
        raise AlgebraError(f"double-exponential bound violated: {report}")
    return report


# --- free normal band (oracle-gated) ---------------------------------------

class OracleMismatch(AlgebraError):
    """The triple construction disagreed with the word-rewriting oracle."""


_NB_ORACLE_MAX = 3


def _normal_band_word_classes(n: int, max_len: int) -> list[frozenset[tuple[int, ...]]]:
    """Equivalence classes of words over n letters modulo idempotency
    (uu ~ u on subwords) and normality (swap of the two middle blocks in any
    four-block split), restricted to words of bounded length."""
    words: list[tuple[int, ...]] = []
    for length in range(1, max_len + 1):
        words.extend(itertools.product(range(n), repeat=length))
    parent: dict[tuple[int, ...], tuple[int, ...]] = {w: w for w in words}

    def find(w):
        root = w
        while parent[root] != root:
            root = parent[root]
        while parent[w] != root:
            parent[w], w = root, parent[w]
        return root

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for w in words:
        length = len(w)
        # idempotent contraction: p (u u) s ~ p u s
        for start in range(length):
            for k in range(1, (length - start) // 2 + 1):
                if w[start:start + k] == w[start + k:start + 2 * k]:
                    union(w, w[:start + k] + w[start + 2 * k:])
        # normality: p q r s ~ p r q s over all four-part splits
        if length >= 4:
            for i in range(1, length - 2):
                for j in range(i + 1, length - 1):
                    for k in range(j + 1, length):
                        swapped = w[:i] + w[j:k] + w[i:j] + w[k:]
                        union(w, swapped)

    classes: dict[tuple[int, ...], set[tuple[int, ...]]] = {}
    for w in words:
        classes.setdefault(find(w), set()).add(w)
    return [frozenset(c) for c in classes.values()]


def free_normal_band(gens: Sequence[str]) -> FiniteAlgebra:
    """Proposed free normal band on the generators, as head/content/tail
    triples with (a,S,b)(c,T,d) = (a, S u T, d).

    The construction is only accepted after the bounded word-rewriting oracle
    confirms that evaluation is a bijection between word classes and triples;
    a mismatch raises OracleMismatch and the feature is unavailable."""
    n = len(gens)
    if n < 1:
        raise AlgebraError("need at least one generator")
    if n > _NB_ORACLE_MAX:
        raise OracleMismatch(
            f"rewriting oracle is limited to {_NB_ORACLE_MAX} generators; "
            "the construction is not accepted unverified")
    triples = []
    for size in range(1, n + 1):
        for content in itertools.combinations(range(n), size):
            cs = frozenset(content)
            for a in content:
                for b in content:
                    triples.append((a, cs, b))
    triples.sort(key=lambda t: (len(t[1]), tuple(sorted(t[1])), t[0], t[2]))
    index = {t: i for i, t in enumerate(triples)}
    carrier = tuple(
        f"{gens[a]}[{''.join(gens[i] for i in sorted(s))}]{gens[b]}"
        for a, s, b in triples)
    table = {
        (i, j): index[(triples[i][0], triples[i][1] | triples[j][1], triples[j][2])]
        for i in range(len(triples)) for j in range(len(triples))}
    alg = FiniteAlgebra(SL_SIG, carrier, {"mul": table})

    def eval_word(word: tuple[int, ...]) -> tuple:
        return (word[0], frozenset(word), word[-1])

    classes = _normal_band_word_classes(n, 2 * n + 2)
    images = [frozenset(eval_word(w) for w in cls) for cls in classes]
    if any(len(img) != 1 for img in images):
        raise OracleMismatch("a word class evaluates to multiple triples")
    image_triples = {next(iter(img)) for img in images}
    if len(classes) != len(triples) or image_triples != set(triples):
        raise OracleMismatch(
            f"word classes ({len(classes)}) do not biject with triples ({len(triples)})")
    return alg


def free_normal_band_size(n: int) -> int:
    """Closed-form size of the triple construction (for reports only)."""
    return sum(k * k * comb(n, k) for k in range(1, n + 1))
