"""Numerical laboratory for the holonomy-area law of the principal U(n)
bundles U(n) -> U(n+m)/U(m) -> G_{n,m} over complex Grassmannians."""

from .holonomy import (
    HolonomyReport,
    Rect,
    SampledUV,
    SampledXY,
    area_model_B,
    area_numeric,
    area_rect_cp1,
    area_surface_S,
    holonomy_analytic,
    holonomy_report,
    holonomy_transport,
    holonomy_um,
    lift_path_flat,
    lift_path_hopf,
    transport,
    z_holonomy,
)
from .lie import (
    FlatPair,
    HopfDisk,
    UmnElement,
    flat_pair_generate,
    hat,
    k_matrix,
    pair_mu,
    random_umn,
    span_closure_check,
    triple_bracket_direct,
    triple_bracket_formula,
    validate_umn,
)
from .matcore import BlockShape, commutator, inner_product, matrix_exp, proj_h, proj_m, real_embedding
from .su2model import (
    SU2Element,
    conformal_factor,
    conformal_h_check,
    f_alg,
    f_group,
    fiber_exp,
    hopf_p,
    i_conjugate,
    t_point,
)

__version__ = "0.1.0"
