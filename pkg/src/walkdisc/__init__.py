"""Square-freeness of walk-matrix determinants and discriminants of random graphs.

Exact arithmetic, normal forms, condition checks, random ensembles,
closed-form limits and a Monte Carlo harness.
"""

from .conditions import (
    AbelianGroupType,
    DiscVerdict,
    WalkVerdict,
    char_matrix_invariant_factors,
    condition_d1,
    condition_d2,
    condition_wp,
    disc_condition_odd_squarefree,
    disc_exact_divisibility,
    disc_mod_p,
    length_identity_check,
    localize_group,
    walk_condition,
    walk_condition_module_oracle,
    walk_matrix,
)
from .ensembles import (
    DEFAULT_SEED,
    EnsembleSpec,
    Seed,
    VectorSpec,
    field_of_order,
    sample_symmetric01,
    sample_symmetric_Fq,
    sample_truncated,
    sample_vector,
)
from .experiments import (
    Estimate,
    ExperimentSpec,
    ReportRow,
    emit,
    run,
    run_oracle_suite,
    run_profinite_check,
    run_table,
)
from .fingerprint import ModuleFingerprint, truncated_cokernel_fingerprint
from .linalg import (
    ExactMatrix,
    charpoly_berkowitz,
    det_valuation_capped,
    discriminant,
    howell_form,
    rank_over_field,
    resultant,
    smith_normal_form,
    sylvester_matrix,
)
from .polynomials import (
    FieldPolynomial,
    enumerate_irreducibles,
    irreducible_count,
    is_irreducible,
    poly_derivative,
    poly_gcd,
    squarefree_mod_p,
)
from .predictor import (
    CertifiedValue,
    asymmetric_walk_limit,
    assemble_over_beta,
    disc_limit_global,
    disc_limit_p,
    disc_limit_psquare,
    event_limit,
    qpochhammer_even,
    rank_limit_rectangular,
    rank_limit_symmetric,
    walk_limit_global,
    walk_limit_p,
)
from .rings import (
    ZZ,
    ExtensionFieldElement,
    FiniteField,
    IntegersMod,
    ResidueElement,
    TruncatedLocalElement,
    TruncatedRing,
    truncated_ring,
)

__version__ = "0.1.0"

__all__ = [
    "AbelianGroupType",
    "assemble_over_beta",
    "asymmetric_walk_limit",
    "CertifiedValue",
    "char_matrix_invariant_factors",
    "charpoly_berkowitz",
    "condition_d1",
    "condition_d2",
    "condition_wp",
    "DEFAULT_SEED",
    "det_valuation_capped",
    "disc_condition_odd_squarefree",
    "disc_exact_divisibility",
    "disc_limit_global",
    "disc_limit_p",
    "disc_limit_psquare",
    "disc_mod_p",
    "discriminant",
    "DiscVerdict",
    "emit",
    "EnsembleSpec",
    "enumerate_irreducibles",
    "Estimate",
    "event_limit",
    "ExactMatrix",
    "ExperimentSpec",
    "ExtensionFieldElement",
    "field_of_order",
    "FieldPolynomial",
    "FiniteField",
    "howell_form",
    "IntegersMod",
    "irreducible_count",
    "is_irreducible",
    "length_identity_check",
    "localize_group",
    "ModuleFingerprint",
    "poly_derivative",
    "poly_gcd",
    "qpochhammer_even",
    "rank_limit_rectangular",
    "rank_limit_symmetric",
    "rank_over_field",
    "ReportRow",
    "ResidueElement",
    "resultant",
    "run",
    "run_oracle_suite",
    "run_profinite_check",
    "run_table",
    "sample_symmetric01",
    "sample_symmetric_Fq",
    "sample_truncated",
    "sample_vector",
    "Seed",
    "smith_normal_form",
    "squarefree_mod_p",
    "sylvester_matrix",
    "truncated_cokernel_fingerprint",
    "truncated_ring",
    "TruncatedLocalElement",
    "TruncatedRing",
    "VectorSpec",
    "walk_condition",
    "walk_condition_module_oracle",
    "walk_limit_global",
    "walk_limit_p",
    "walk_matrix",
    "WalkVerdict",
    "ZZ",
]
