"""Brownian shift laboratory: desk-scale numerics for the shift-plus-slot
operator on H^2 (+) C, its invariant subspaces, unitary equivalence of
restrictions, and normalized-power asymptotics."""

__version__ = "0.1.0"

from .errors import (
    ContractViolation,
    DimensionMismatch,
    DomainError,
    NonvanishingRoot,
    PrecisionLoss,
    TruncationOverflow,
    UndefinedBoundaryValue,
)
from .hardy import (
    DEFAULT_TRUNC,
    AtomicSingular,
    BlaschkeProduct,
    BoundaryValue,
    HardyVector,
    InnerFunction,
    ProductInner,
    boundary_value,
    circle_norm_squared,
    divide_by_boundary_root,
    g_norm_squared,
    h2_inner_product,
    inner_eval,
    inner_from_descriptor,
    inner_to_descriptor,
    make_g,
    model_space_project,
    taylor_coefficients,
)
from .shift import (
    BrownianShiftParams,
    BrownianVector,
    TruncatedOperator,
    apply,
    apply_adjoint,
    operator_norm,
    operator_norm_diagnostic,
    power_apply,
    rank_one_decomposition,
    slot_power_closed_form,
    truncated_matrix,
)
from .subspaces import (
    EquivalenceVerdict,
    Intertwiner,
    SubspaceSpec,
    basis,
    basis_matrix,
    build_intertwiner,
    classify_equivalence,
    gram_residual,
    invariance_residual,
    ratio_identity_residual,
    reduce_restriction,
    restricted_matrix,
    restricted_norm,
    restriction_spectrum_gap,
    type1,
    type2,
)
from .asymptotics import (
    DecayReport,
    adjoint_power_norm_closed_form,
    c00_adjoint_decay,
    c00_forward_decay,
    power_norm_growth,
    sot_convergence_certificate,
)
from .commutant import (
    OrbitCertificate,
    ablated_commutant_dimension,
    commutant_dimension,
    joint_orbit_span,
)
from .checks import (
    CheckResult,
    blaschke_g_norm_formula,
    example1_condition,
    example1_solve_sigma2,
    example2_boundary_modulus,
    example2_condition,
    example2_integral,
    example2_solve_sigma2,
)
from .battery import run_battery
