"""Exponent calculus, weight transforms and 1-D potential-operator numerics
for grand Lebesgue norms (sup of |f|_p / psi(p) over an exponent interval)."""

from .catalog import MonotoneBranch, Piece, Singularity, TestFunction
from .errors import (
    DivergenceError,
    DomainError,
    FeasibilityError,
    GlpotError,
    NoRootError,
    ToleranceError,
)
from .exponents import (
    MultiIndex,
    PotentialParams,
    derivative_bound_shape,
    holder_conjugate,
    marcinkiewicz_theta,
    orlicz_exponent,
    riesz_bound_shape,
    singular_bound_shape,
    sobolev_p,
    sobolev_q,
    young_k,
)
from .grand import (
    FitResult,
    GrandNormReport,
    PotentialNormEvaluator,
    fit_growth_exponent,
    grand_norm,
    v_functional,
)
from .norms import (
    NormResult,
    decreasing_rearrangement,
    distribution_function,
    lp_norm,
    lp_norm_closed_form,
    lp_norm_report,
    weak_lp_quasinorm,
)
from .potentials import (
    EvalGrid,
    KernelSpec,
    apply_kernel,
    apply_kernel_report,
    bessel_potential,
    fractional_maximal,
    hl_maximal,
    interval_mass,
    log_potential_far,
    log_potential_near,
    macdonald_K,
    maximal_over_grid,
    parse_kernel_spec,
)
from .psi import (
    NuResult,
    PowerPsiSpec,
    PsiFunction,
    SlowlyVarying,
    bessel_theta,
    check_slowly_varying,
    derivative_zeta,
    make_power_psi,
    parse_psi_spec,
    power_psi,
    riesz_zeta,
    singular_psi1,
    truncated_nu,
    truncated_nu_general,
    zeta_S,
)
from .quadrature import QuadratureSpec
from .special import upper_gamma

__version__ = "0.1.0"

__all__ = [
    "DivergenceError",
    "DomainError",
    "EvalGrid",
    "FeasibilityError",
    "FitResult",
    "GlpotError",
    "GrandNormReport",
    "KernelSpec",
    "MonotoneBranch",
    "MultiIndex",
    "NoRootError",
    "NormResult",
    "NuResult",
    "Piece",
    "PotentialNormEvaluator",
    "PotentialParams",
    "PowerPsiSpec",
    "PsiFunction",
    "QuadratureSpec",
    "Singularity",
    "SlowlyVarying",
    "TestFunction",
    "ToleranceError",
    "apply_kernel",
    "apply_kernel_report",
    "bessel_potential",
    "bessel_theta",
    "check_slowly_varying",
    "decreasing_rearrangement",
    "derivative_bound_shape",
    "derivative_zeta",
    "distribution_function",
    "fit_growth_exponent",
    "fractional_maximal",
    "grand_norm",
    "hl_maximal",
    "holder_conjugate",
    "interval_mass",
    "log_potential_far",
    "log_potential_near",
    "lp_norm",
    "lp_norm_closed_form",
    "lp_norm_report",
    "macdonald_K",
    "make_power_psi",
    "marcinkiewicz_theta",
    "maximal_over_grid",
    "orlicz_exponent",
    "parse_kernel_spec",
    "parse_psi_spec",
    "power_psi",
    "riesz_bound_shape",
    "riesz_zeta",
    "singular_bound_shape",
    "singular_psi1",
    "sobolev_p",
    "sobolev_q",
    "truncated_nu",
    "truncated_nu_general",
    "upper_gamma",
    "v_functional",
    "weak_lp_quasinorm",
    "young_k",
    "zeta_S",
]
