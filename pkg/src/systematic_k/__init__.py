"""Exact desk-scale computations with almost-graded rings, idempotent
completions, block-triangular decompositions, and K0 groups."""

from .errors import (
    BudgetExceededError,
    InvalidGroupError,
    MorphismViolationError,
    NonAdditiveFunctorError,
    NotIdempotentError,
    NotLowerTriangularError,
    NotStronglySystematicError,
    OrderNotInvariantError,
    SpecMismatchError,
    SupportViolationError,
    SystematicKError,
    UnclassifiableSlotError,
    WindowTooSmallError,
)
from .groups import (
    Action,
    ConeOrder,
    Extension,
    FiniteTable,
    FreeAbelian,
    LatticeQuotient,
    Semidirect,
    linear_extension,
    lineality_extension,
    named_action,
    project_and_section,
    trivial_order,
)
from .rings import (
    DualBasis,
    MonoidRing,
    PowerLocalization,
    RingElem,
    ZZ,
    QQ,
    F2,
    ModularBase,
    base_from_name,
    dual_basis,
    filtered_polynomial_ring,
    group_ring,
    h_part_subring,
    identity_subring,
    is_strongly_systematic_at,
    lattice_subring,
    laurent_group_ring,
    monoid_ring,
    polynomial_ring,
    power_localization,
    ring_arith,
    skew_group_ring,
    subring_over_subgroup,
)
from .modcat import (
    FreeSysModule,
    IdemMorphism,
    IdemObject,
    LTStructure,
    PresentedModule,
    SysMorphism,
    check_split_naturality,
    free_object,
    full_split,
    hom_component_basis,
    lt_block_object,
    presented_is_zero,
    presented_module,
    random_idem_morphism,
    random_lt_idempotent,
    rho_naturality_counterexample,
    shift_module,
    shift_tensor_maps,
    split_lt_idempotent,
    tensor_extend,
    validate_morphism,
)
from .kzero import (
    IsoReport,
    K0Element,
    K0Group,
    WindowK0,
    coset_window,
    degree_window,
    filtered_graded_agreement,
    k0_bruteforce,
    k0_class,
    present_k0_group,
    quotient_k0_iso,
    semidirect_k0_iso,
    semidirect_window,
    shift_action,
    strong_reduction_k0,
)

__version__ = "0.1.0"
