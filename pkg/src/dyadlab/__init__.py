"""Dyadic weight constants, operators and weighted norm checks."""
from .grid import (
    DyadicGrid,
    GridFunction,
    Weight,
    WeightFamilySpec,
    as_weight,
    conjugate,
    cube_means,
    dual_weight,
    load_weight_spec,
    materialize,
    random_weight,
)
from .operators import (
    cz_decompose,
    dyadic_maximal,
    llogl_integrals,
    local_maximal_integrals,
    log_maximal,
    mr_maximal,
    principal_cubes,
    weak_quasinorm,
    weighted_maximal,
)
from .shifts import HaarShift, apply_shift, build_shift, commutator_matrix, load_shift_spec, shift_as_matrix
from .constants import (
    ConstantsReport,
    a1_constant,
    ainfty_hruscev,
    ainfty_wilson,
    ap_constant,
    bmo_norm,
    constants_report,
    rhi_exponent,
    rhi_verify,
    two_weight_bp,
    weighted_l2_norm_exact,
    weighted_lp_norm_estimate,
)
from .config import ExperimentConfig, load_config

__version__ = "0.1.0"
