"""Command-line entry point and the theorem desk-check suites."""

from __future__ import annotations

import argparse
import itertools
import json
import sys
import time
from dataclasses import dataclass, field

from .algebra import (
    AlgebraError,
    FiniteAlgebra,
    dump_algebra,
    enumerate_models,
    fan_semilattice,
    is_conservative,
    is_entropic,
    is_idempotent,
    is_symmetric,
    load_algebra,
    satisfies,
    units,
)
from .closure import (
    enumerate_subalgebras,
    generated_subalgebra,
    quotient_by_rho,
    reduced_subsets,
)
from .free import (
    cdis_chain,
    dissemilattice_chain,
    dump_free_model,
    free_cdis,
    free_power_model,
    free_semilattice,
    free_semilattice_unit,
    generator_labels,
    load_free_model,
    cardinality_report,
)
from .power import PowerVariant, build_power
from .slo_laws import (
    SloAlgebra,
    Violation,
    check_slo,
    disjunctive_form,
    extend_hom,
    full_subreduct,
)
from .terms import (
    DslError,
    Identity,
    Signature,
    Term,
    parse_identity,
    parse_signature,
)

SG_SIG = Signature("SG", (("mul", 2),))
ASSOC = Identity(
    Term.app("mul", Term.app("mul", Term.var("x"), Term.var("y")), Term.var("z")),
    Term.app("mul", Term.var("x"), Term.app("mul", Term.var("y"), Term.var("z"))))
COMM = Identity(
    Term.app("mul", Term.var("x"), Term.var("y")),
    Term.app("mul", Term.var("y"), Term.var("x")))
IDEM = Identity(Term.app("mul", Term.var("x"), Term.var("x")), Term.var("x"))
SEMILATTICE_IDENTITIES = (ASSOC, COMM, IDEM)

# Free CDIS carrier sizes: 2, 4, 14 as reported in the source analysis; the
# values for 3 and 4 generators were pinned by the pre-build subset-filter
# oracle (subalgebra counts 61 and 2480, doubled).
EXPECTED_CDIS_SIZES = {0: 2, 1: 4, 2: 14, 3: 122, 4: 4960}


@dataclass
class SuiteReport:
    suite: str
    checks: list[dict] = field(default_factory=list)
    wall_time: float = 0.0

    def add(self, check_id: str, ok: bool, witness=None) -> None:
        entry = {"id": check_id, "ok": ok}
        if not ok:
            entry["witness"] = witness if witness is not None else {}
        self.checks.append(entry)

    @property
    def ok(self) -> bool:
        return all(c["ok"] for c in self.checks)

    @property
    def instance_count(self) -> int:
        return len(self.checks)

    def to_json(self) -> str:
        return json.dumps({
            "suite": self.suite,
            "instances": self.instance_count,
            "passed": sum(1 for c in self.checks if c["ok"]),
            "ok": self.ok,
            "checks": self.checks,
        }, ensure_ascii=False, sort_keys=True)

    def render(self) -> str:
        lines = [f"suite {self.suite}: "
                 f"{sum(1 for c in self.checks if c['ok'])}/{self.instance_count} "
                 f"passed in {self.wall_time:.2f}s"]
        for c in self.checks:
            if not c["ok"]:
                lines.append(f"  FAIL {c['id']}: {json.dumps(c.get('witness'), ensure_ascii=False)}")
        return "\n".join(lines)


def _timed(fn):
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        report = fn(*args, **kwargs)
        report.wall_time = time.perf_counter() - start
        return report
    return wrapper


@_timed
def suite_gl(max_size: int = 3) -> SuiteReport:
    """Linear identities lift to power algebras; non-linear ones need not.

    For every semigroup table up to max_size the power algebra must satisfy
    associativity, and commutativity when the base is commutative; the fan
    semilattice exhibits an idempotent base with non-idempotent power.
    """
    report = SuiteReport("gl")
    for n in range(1, max_size + 1):
        for k, alg in enumerate(enumerate_models(SG_SIG, n, [ASSOC])):
            power = build_power(alg, PowerVariant.NONEMPTY)
            res = satisfies(power.alg, ASSOC)
            report.add(f"n={n}#{k}:assoc-lift", bool(res), res.witness_labels(power.alg))
            if satisfies(alg, COMM):
                res = satisfies(power.alg, COMM)
                report.add(f"n={n}#{k}:comm-lift", bool(res), res.witness_labels(power.alg))
    fan = fan_semilattice()
    fan_power = build_power(fan, PowerVariant.NONEMPTY)
    res = satisfies(fan_power.alg, IDEM)
    report.add("fan:base-idempotent", is_idempotent(fan))
    report.add("fan:power-not-idempotent", not res,
               None if not res else "expected idempotency to fail")
    if not res:
        # non-linear identities need not lift: record the witness
        report.add("fan:witness", True)
        report.checks[-1]["witness"] = res.witness_labels(fan_power.alg)
        report.checks[-1]["ok"] = True
    return report


@_timed
def suite_cor52(max_size: int = 3) -> SuiteReport:
    """Power idempotency holds exactly when every non-empty subset is closed."""
    report = SuiteReport("cor52")
    for n in range(1, max_size + 1):
        for k, alg in enumerate(enumerate_models(SG_SIG, n, [IDEM])):
            power = build_power(alg, PowerVariant.NONEMPTY)
            power_idem = bool(satisfies(power.alg, IDEM))
            all_closed = all(
                generated_subalgebra(alg, s) == s
                for s in power.subsets)
            ok = power_idem == all_closed
            report.add(f"n={n}#{k}:biconditional", ok,
                       None if ok else {"power_idempotent": power_idem,
                                        "all_subsets_closed": all_closed})
            if is_conservative(alg):
                report.add(f"n={n}#{k}:conservative-implies-idempotent", power_idem,
                           None if power_idem else {"conservative": True})
    return report


@_timed
def suite_counts(max_generators: int = 3) -> SuiteReport:
    """Free CDIS cardinalities and the double-exponential bound."""
    report = SuiteReport("counts")
    for n in range(0, max_generators + 1):
        rep = cardinality_report(n, cap=max(4, max_generators))
        expected = EXPECTED_CDIS_SIZES.get(n)
        ok = expected is not None and rep["n_free_cdis"] == expected
        report.add(f"gens={n}:cdis-size", ok,
                   None if ok else {"expected": expected, "got": rep["n_free_cdis"]})
        bound_ok = rep["n_free_cdis"] <= rep["bound_2_2n"]
        report.add(f"gens={n}:bound", bound_ok, None if bound_ok else rep)
        pair_ok = (rep["n_free_cdis"] == 2 * rep["n_subalgebras_incl_empty"]
                   == 2 * rep["n_reduced_subsets"])
        report.add(f"gens={n}:doubling", pair_ok, None if pair_ok else rep)
    return report


def _universality_instances():
    """(label, free model, targets) triples for the extension suite."""
    cdis_targets = [("chain2", cdis_chain(2)), ("chain3", cdis_chain(3))]
    for n in range(0, 3):
        gens = generator_labels(n)
        yield (f"cdis{n}", free_cdis(gens), cdis_targets)
    sl_targets = [("dis2", dissemilattice_chain(2)), ("dis3", dissemilattice_chain(3))]
    for n in (1, 2):
        gens = generator_labels(n)
        fp = free_power_model(free_semilattice(gens), gens, PowerVariant.NONEMPTY)
        yield (f"powsl{n}", fp.model, sl_targets)
        fp0 = free_power_model(free_semilattice(gens), gens, PowerVariant.WITH_EMPTY)
        yield (f"powsl0_{n}", fp0.model, cdis_targets)
    for n in (0, 1):
        gens = generator_labels(n)
        base = free_semilattice_unit(gens, unit_as_symbol=True)
        fp1 = free_power_model(base, gens, PowerVariant.WITH_UNIT)
        yield (f"powsl1_{n}", fp1.model, cdis_targets)


@_timed
def suite_universality() -> SuiteReport:
    """Every generator map into a matching target extends to a unique hom."""
    report = SuiteReport("universality")
    for label, model, targets in _universality_instances():
        gens = sorted(model.generators)
        for tlabel, target in targets:
            for values in itertools.product(target.alg.elements(), repeat=len(gens)):
                h = dict(zip(gens, values))
                result = extend_hom(model, h, target)
                cid = f"{label}->{tlabel}:{','.join(target.alg.carrier[v] for v in values)}"
                report.add(f"{cid}:hom", result.is_homomorphism,
                           None if result.is_homomorphism else
                           json.loads(result.failure.to_json()))
                report.add(f"{cid}:unique", result.unique)
    return report


ALL_SUITES = {
    "gl": lambda args: suite_gl(args.max_size),
    "cor52": lambda args: suite_cor52(args.max_size),
    "counts": lambda args: suite_counts(min(args.max_size, 4)),
    "universality": lambda args: suite_universality(),
}


# --- CLI -------------------------------------------------------------------

class UsageError(Exception):
    pass


def _load_slo(path: str) -> tuple[FiniteAlgebra, SloAlgebra | None]:
    alg, desig = load_algebra(path)
    if "join" not in desig:
        return alg, None
    zero = None if "zero" not in desig else alg.index(desig["zero"])
    unit = None if "unit" not in desig else alg.index(desig["unit"])
    checked = check_slo(alg, desig["join"], zero, unit)
    if isinstance(checked, Violation):
        raise AlgebraError(f"algebra fails SLO laws: {checked.to_json()}")
    return alg, checked


def _variant(name: str) -> PowerVariant:
    try:
        return PowerVariant(name)
    except ValueError:
        raise UsageError(
            f"unknown variant {name!r}; choose from "
            f"{', '.join(v.value for v in PowerVariant)}") from None


def _write_out(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2, ensure_ascii=False, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _cmd_parse(args) -> int:
    with open(args.sig) as fh:
        sig = parse_signature(fh.read())
    print(json.dumps({
        "name": sig.name,
        "ops": {s: a for s, a in sig.ops},
        "join": sig.join_symbol, "zero": sig.zero_symbol, "unit": sig.unit_symbol,
    }, ensure_ascii=False))
    return 0


def _cmd_check(args) -> int:
    alg, _ = _load_slo(args.alg)
    ident = parse_identity(args.id, alg.sig)
    res = satisfies(alg, ident)
    if res:
        print(f"satisfied: {ident}")
        return 0
    print(f"violated: {ident} witness {res.witness_labels(alg)}")
    return 1


def _cmd_props(args) -> int:
    alg, _ = _load_slo(args.alg)
    print(json.dumps({
        "idempotent": is_idempotent(alg),
        "entropic": is_entropic(alg),
        "symmetric": is_symmetric(alg),
        "conservative": is_conservative(alg),
        "units": sorted(alg.carrier[u] for u in units(alg)),
    }, ensure_ascii=False))
    return 0


def _cmd_power(args) -> int:
    alg, _ = _load_slo(args.alg)
    power = build_power(alg, _variant(args.variant))
    doc = dump_algebra(
        power.alg, join=power.join,
        zero=None if power.zero is None else power.alg.carrier[power.zero],
        unit=None if power.unit is None else power.alg.carrier[power.unit])
    _write_out(doc, args.out)
    return 0


def _cmd_subalgebras(args) -> int:
    alg, _ = _load_slo(args.alg)
    subs = enumerate_subalgebras(alg, include_empty=args.include_empty)
    labels = [sorted(alg.carrier[i] for i in s) for s in subs]
    print(json.dumps({"count": len(subs), "subalgebras": labels}, ensure_ascii=False))
    return 0


def _cmd_quotient(args) -> int:
    alg, _ = _load_slo(args.alg)
    variant = _variant(args.variant)
    power = build_power(alg, variant)
    quotient = quotient_by_rho(power)
    slo = quotient.slo
    doc = dump_algebra(
        slo.alg, join=slo.join,
        zero=None if slo.zero is None else slo.alg.carrier[slo.zero],
        unit=None if slo.unit is None else slo.alg.carrier[slo.unit])
    _write_out(doc, args.out)
    return 0


def _cmd_free_sl(args) -> int:
    gens = generator_labels(args.gens)
    alg = free_semilattice(gens)
    _write_out(dump_algebra(alg), args.out)
    return 0


def _cmd_free_cdis(args) -> int:
    model = free_cdis(generator_labels(args.gens))
    if args.count:
        print(len(model.slo.carrier))
        return 0
    _write_out(dump_free_model(model), args.out)
    return 0


def _cmd_disj(args) -> int:
    alg, slo = _load_slo(args.alg)
    if slo is None:
        raise UsageError("algebra file must designate a join for disjunctive forms")
    gens = [alg.index(lbl.strip()) for lbl in args.gens.split(",") if lbl.strip()]
    elem = alg.index(args.elem)
    form = disjunctive_form(slo, gens, elem)
    print(json.dumps({
        "target": alg.carrier[elem],
        "parts": [alg.carrier[p] for p in form.parts],
    }, ensure_ascii=False))
    return 0


def _cmd_extend(args) -> int:
    with open(args.free) as fh:
        model = load_free_model(json.load(fh))
    _, target = _load_slo(args.target)
    if target is None:
        raise UsageError("target file must designate a join")
    h = {}
    for piece in args.map.split(","):
        if not piece.strip():
            continue
        if "=" not in piece:
            raise UsageError(f"bad map entry {piece!r}; expected gen=element")
        g, lbl = piece.split("=", 1)
        h[g.strip()] = target.alg.index(lbl.strip())
    result = extend_hom(model, h, target)
    print(json.dumps({
        "mapping": {model.slo.alg.carrier[i]: target.alg.carrier[v]
                    for i, v in enumerate(result.mapping)},
        "homomorphism": result.is_homomorphism,
        "unique": result.unique,
    }, ensure_ascii=False))
    return 0 if result.is_homomorphism else 1


def _cmd_suite(args) -> int:
    names = list(ALL_SUITES) if args.name == "all" else [args.name]
    ok = True
    for name in names:
        report = ALL_SUITES[name](args)
        if args.json:
            print(report.to_json())
        else:
            print(report.render())
        ok = ok and report.ok
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slo",
        description="Finite-model workbench for semilattice ordered algebras")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse and validate a signature file")
    p.add_argument("--sig", required=True)
    p.set_defaults(fn=_cmd_parse)

    p = sub.add_parser("check", help="check an identity on an algebra")
    p.add_argument("--alg", required=True)
    p.add_argument("--id", required=True)
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("props", help="structural property report")
    p.add_argument("--alg", required=True)
    p.set_defaults(fn=_cmd_props)

    p = sub.add_parser("power", help="build a power algebra")
    p.add_argument("--alg", required=True)
    p.add_argument("--variant", default="nonempty")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_power)

    p = sub.add_parser("subalgebras", help="enumerate closed subsets")
    p.add_argument("--alg", required=True)
    p.add_argument("--include-empty", action="store_true")
    p.set_defaults(fn=_cmd_subalgebras)

    p = sub.add_parser("quotient-rho", help="replica quotient of a power algebra")
    p.add_argument("--alg", required=True)
    p.add_argument("--variant", default="with_empty")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_quotient)

    p = sub.add_parser("free-sl", help="free semilattice")
    p.add_argument("--gens", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_free_sl)

    p = sub.add_parser("free-cdis", help="free commutative doubly-idempotent semiring")
    p.add_argument("--gens", type=int, required=True)
    p.add_argument("--count", action="store_true")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_free_cdis)

    p = sub.add_parser("disj", help="disjunctive form of an element")
    p.add_argument("--alg", required=True)
    p.add_argument("--gens", required=True, help="comma-separated generator labels")
    p.add_argument("--elem", required=True)
    p.set_defaults(fn=_cmd_disj)

    p = sub.add_parser("extend", help="extend a generator map to a homomorphism")
    p.add_argument("--free", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--map", required=True, help="comma-separated gen=element pairs")
    p.set_defaults(fn=_cmd_extend)

    p = sub.add_parser("suite", help="run a desk-check suite")
    p.add_argument("name", choices=[*ALL_SUITES, "all"])
    p.add_argument("--max-size", type=int, default=3)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_suite)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except (UsageError, DslError, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AlgebraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
