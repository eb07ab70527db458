"""Variable-elasticity-of-substitution production function toolkit."""

from .core import (
    BENCHMARK,
    EvalBundle,
    Limit,
    Reduction,
    SigmaLimits,
    VesParams,
    aggregate_output,
    classify_reduction,
    eval_bundle,
    eval_f,
    eval_fprime,
    eval_fsecond,
    eval_mrs,
    eval_shares,
    eval_sigma,
    eval_sigma_prime,
    limits_fprime,
    shares_limits,
    sigma_limits,
    sigma_turning_point,
    validate_params,
)
from .grid import GridSpec

__version__ = "0.1.0"

__all__ = [
    "BENCHMARK",
    "EvalBundle",
    "Limit",
    "Reduction",
    "SigmaLimits",
    "VesParams",
    "aggregate_output",
    "classify_reduction",
    "eval_bundle",
    "eval_f",
    "eval_fprime",
    "eval_fsecond",
    "eval_mrs",
    "eval_shares",
    "eval_sigma",
    "eval_sigma_prime",
    "limits_fprime",
    "shares_limits",
    "sigma_limits",
    "sigma_turning_point",
    "validate_params",
    "GridSpec",
]
