"""Exact signatures and stability invariants of hermitian forms over
algebras with involution, over formally real fields with finitely many
orderings.

Everything is computed with exact rational arithmetic: tower fields
built from Q by square roots and infinitesimals, their finite ordering
spaces, quadratic and hermitian forms, constructive splitting
certificates, normalized signatures, and the integer-lattice image of
the total signature map with its cokernel invariants.
"""

from .algebras import (
    Algebra,
    AlgebraElement,
    ExchangeAlgebra,
    FieldAlgebra,
    HermitianForm,
    MatrixAlgebra,
    QuaternionAlgebra,
    SplitWitness,
    UnitaryQuadraticAlgebra,
    UnitaryQuaternionAlgebra,
    algebra_from_json,
    diagonalize_hermitian,
    involution_apply,
    morita_flatten,
    reduced_norm,
    reduced_trace,
    rho_form,
    sym_basis,
    trace_form,
    twist,
)
from .fields import (
    FieldElement,
    FieldTower,
    MismatchError,
    Ordering,
    TowerError,
    harrison_set,
    is_square,
    orderings,
    sign_at,
)
from .quadratic import (
    QuadraticForm,
    SignatureVector,
    SingularFormError,
    diagonalize_gram,
    hasse_invariant,
    hilbert_symbol,
    is_division_quaternion,
    is_witt_trivial_q,
    knebusch_check,
    pfister,
    scharlau_transfer,
)
from .signatures import (
    LocalType,
    ReferenceForm,
    going_up_check,
    h_signature,
    local_type,
    nil_set,
    raw_signature,
    reference_search,
    total_signature,
)
from .splitting import (
    BudgetExhausted,
    PreconditionNil,
    SplittingCertificate,
    find_certificate,
    transport_form,
    verify_certificate,
)
from .stability import (
    ImageLattice,
    InvariantViolation,
    NilAwareSpace,
    Probes,
    StabilityReport,
    h0_search,
    image_lattice,
    invariance_suite,
    quadratic_image_lattice,
    relative_stability,
    stability_report,
)

__version__ = "0.1.0"

__all__ = [
    "FieldTower",
    "FieldElement",
    "Ordering",
    "TowerError",
    "MismatchError",
    "orderings",
    "sign_at",
    "is_square",
    "harrison_set",
    "QuadraticForm",
    "SignatureVector",
    "SingularFormError",
    "diagonalize_gram",
    "pfister",
    "scharlau_transfer",
    "knebusch_check",
    "hilbert_symbol",
    "hasse_invariant",
    "is_division_quaternion",
    "is_witt_trivial_q",
    "Algebra",
    "AlgebraElement",
    "FieldAlgebra",
    "ExchangeAlgebra",
    "UnitaryQuadraticAlgebra",
    "QuaternionAlgebra",
    "UnitaryQuaternionAlgebra",
    "MatrixAlgebra",
    "HermitianForm",
    "SplitWitness",
    "algebra_from_json",
    "involution_apply",
    "sym_basis",
    "reduced_trace",
    "reduced_norm",
    "diagonalize_hermitian",
    "morita_flatten",
    "twist",
    "rho_form",
    "trace_form",
    "SplittingCertificate",
    "BudgetExhausted",
    "PreconditionNil",
    "find_certificate",
    "verify_certificate",
    "transport_form",
    "LocalType",
    "ReferenceForm",
    "nil_set",
    "local_type",
    "raw_signature",
    "reference_search",
    "h_signature",
    "total_signature",
    "going_up_check",
    "NilAwareSpace",
    "ImageLattice",
    "StabilityReport",
    "InvariantViolation",
    "Probes",
    "image_lattice",
    "quadratic_image_lattice",
    "stability_report",
    "h0_search",
    "relative_stability",
    "invariance_suite",
]
