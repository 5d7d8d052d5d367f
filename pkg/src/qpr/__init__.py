"""qpr: overflow-safe q-series special functions and numerical certification
of the asymptotic regimes of complex-scaled q-Laguerre polynomials."""

from .numerics import (
    ConvergenceError,
    DomainError,
    LogPolarComplex,
    QprError,
    RangeGuardError,
    SummationResult,
    lp_from_complex,
    lp_pow_int,
    sum_rescaled,
)
from .qseries import (
    QContext,
    b_function,
    euler_product_series_check,
    pochhammer,
    q_binomial,
    ramanujan_a,
    ramanujan_a_deriv,
    remainder_r1,
    remainder_r2,
    theta,
    theta_triple_product,
)
from .diophantine import (
    DiophantineWitness,
    RealValue,
    chi,
    convergents,
    fixture_irrationals,
    floor_frac,
    joint_witness_search,
    orbit,
    parse_real,
    witness_search,
)
from .qlaguerre import (
    ScalingParameter,
    SplitSumResult,
    factor_e,
    factor_f,
    laguerre_direct,
    laguerre_scaled_lp,
    normalized_laguerre,
    scale_point,
    split_sums,
)
from .asymptotics import (
    RegimeReport,
    classify_case,
    eval_case1,
    eval_case_aq,
    eval_case_theta,
    fit_decay_slope,
    nu_n,
    run_verify,
    scaling_range_advisory,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError", "DomainError", "LogPolarComplex", "QprError",
    "RangeGuardError", "SummationResult", "lp_from_complex", "lp_pow_int",
    "sum_rescaled",
    "QContext", "b_function", "euler_product_series_check", "pochhammer",
    "q_binomial", "ramanujan_a", "ramanujan_a_deriv", "remainder_r1",
    "remainder_r2", "theta", "theta_triple_product",
    "DiophantineWitness", "RealValue", "chi", "convergents",
    "fixture_irrationals", "floor_frac", "joint_witness_search", "orbit",
    "parse_real", "witness_search",
    "ScalingParameter", "SplitSumResult", "factor_e", "factor_f",
    "laguerre_direct", "laguerre_scaled_lp", "normalized_laguerre",
    "scale_point", "split_sums",
    "RegimeReport", "classify_case", "eval_case1", "eval_case_aq",
    "eval_case_theta", "fit_decay_slope", "nu_n", "run_verify",
    "scaling_range_advisory",
]
