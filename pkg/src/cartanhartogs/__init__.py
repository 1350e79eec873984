"""Cartan-Hartogs domains, their symplectic duals, and explicit global
Darboux maps, with a numerical verification battery."""

__version__ = "0.1.0"

from .capacity import (
    CapacityCertificate,
    CheckOutcome,
    ball_in_hartogs,
    capacity_certificate,
    dual_image_bounds,
    hartogs_in_cylinder,
    solve_target_system,
    spectral_coords,
    unit_ball_inequality,
)
from .errors import ConvergenceError, DomainError, ShapeError
from .forms import (
    HermitianForm,
    TwoForm,
    base_restriction_matches,
    complex_hessian,
    complex_hessian_batch,
    det_dual_hessian,
    det_dual_hessian_fd,
    dual_hessian_min_eigs,
    form_distance,
    hermitian_to_twoform_matrix,
    is_positive_definite,
    jacobian_batch,
    kahler_form_at,
    pullback,
    pullback_batch,
    standard_symplectic,
)
from .hartogs import (
    BaseEmbedding,
    HartogsPoint,
    HartogsSpec,
    as_point,
    ch_member,
    dual_potential,
    dual_potential_field,
    embed_base,
    hartogs_isotropy_apply,
    lift_embedding,
    make_hartogs,
    phi_inverse,
    phi_map,
    point_from_vector,
    polydisc_inclusion,
    polydisc_to_type1,
    potential,
    potential_field,
    psi_inverse,
    psi_map,
    sample_member_points,
    unit_ball_darboux,
)
from .jtsys import (
    KIND_POLYDISC,
    KIND_TYPE_I,
    DomainSpec,
    SpectralDecomposition,
    b_quarter_power_on_z,
    b_quarter_power_operator,
    bergman_apply,
    flat_distance,
    generic_norm,
    hyperbolic_space,
    isotropy_apply,
    make_domain,
    membership,
    norm_self,
    random_isotropy,
    singular_values,
    spectral_decompose,
    triple_product,
)
from .measures import (
    GennaioResult,
    MCEstimate,
    capital_f,
    capital_f_ratio,
    dual_flat_ratio_formula,
    duality_gap,
    duality_root,
    fit_genus,
    flat_volume_exact,
    gennaio_check,
    log_capital_f,
    mc_volume_dual,
    mc_volume_flat,
    selberg_quadrature,
    selberg_quadrature_auto,
    selberg_quadrature_symmetrized,
)
