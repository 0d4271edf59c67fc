"""Filtered polynomial approximation and filtered hyperinterpolation on S^d."""

from .cubature import (
    CubatureRule,
    RuleFileError,
    load_rule,
    mz_spot_check,
    product_rule_s2,
    save_rule,
    validate_exactness,
)
from .filters import (
    Filter,
    bv_estimate,
    filter_from_name,
    forward_difference,
    make_counterexample,
    make_hermite,
    make_riesz,
    make_smooth,
    make_step,
    make_vp,
)
from .kernel import ZonalKernel, build_kernel, eval_kernel_cos, eval_kernel_points, kernel_l1_norm
from .operators import (
    CesaroSpec,
    ZonalExpansion,
    apply_fully_discrete,
    apply_semidiscrete,
    cesaro_mean,
    dyadic_block,
    operator_norm_fully_discrete,
    operator_norm_semidiscrete,
    summation_by_parts_apply,
)
from .points import fibonacci_sphere, north_pole, random_unit_vectors
from .sobolev import SobolevProfile, best_approx_upper, lp_error, make_test_function, sobolev_norm_2
from .specfun import (
    GaussRule1D,
    dim_harmonic,
    gauss_legendre,
    gegenbauer_at_one,
    gegenbauer_batch,
    gegenbauer_eval,
    gegenbauer_order,
)

__version__ = "0.1.0"
