"""Finite-model workbench for semilattice ordered algebras."""

from .terms import (
    DslError,
    Identity,
    Linearization,
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
from .algebra import (
    AlgebraError,
    FiniteAlgebra,
    ResourceCapExceeded,
    SatResult,
    catalog,
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
from .power import (
    InclusionReport,
    PowerAlgebra,
    PowerVariant,
    build_power,
    complex_linear_term,
    complex_op,
    nonlinear_inclusion_check,
    subset_label,
)
from .slo_laws import (
    DisjunctiveForm,
    HomResult,
    NotGenerated,
    SloAlgebra,
    Violation,
    check_slo,
    disjunctive_form,
    enumerate_homomorphisms,
    extend_hom,
    full_subreduct,
    idempotency_criterion,
    natural_order,
    word_op_distributes,
)
from .closure import (
    PreconditionError,
    QuotientAlgebra,
    condition_one_check,
    enumerate_subalgebras,
    generated_subalgebra,
    is_reduced,
    quotient_by_rho,
    quotient_label,
    reduced_subsets,
    rho_equivalent,
    rho_witness,
)
from .free import (
    FreeModel,
    FreePower,
    OracleMismatch,
    cardinality_report,
    cdis_chain,
    dissemilattice_chain,
    dump_free_model,
    free_cdis,
    free_normal_band,
    free_normal_band_size,
    free_power_model,
    free_semilattice,
    free_semilattice_unit,
    free_slo_nonempty,
    generator_labels,
    load_free_model,
)

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
