"""Sum-capacity bounds for binary CDMA under near-far power fluctuation."""

from .bounds import BoundSet, capacity_bounds, conjectured_upper_bound, lower_bound, underloaded_capacity
from .config import OptimizerConfig, OracleConfig, RunConfig, TanakaConfig, load_config
from .core import SystemParams, bpsk_capacity
from .errors import (
    BracketFailureError,
    DomainError,
    NearFarError,
    NumericError,
    OptimizerBudgetError,
    SizeError,
)
from .oracle import MiEstimate, sum_capacity_estimate
from .spectral import SignatureMatrix, pooled_spectrum, sample_signature, spectrum_report
from .tanaka import TanakaBound, tanaka_bound, tanaka_bound_nearfar

__all__ = [
    "BoundSet",
    "BracketFailureError",
    "DomainError",
    "MiEstimate",
    "NearFarError",
    "NumericError",
    "OptimizerBudgetError",
    "OptimizerConfig",
    "OracleConfig",
    "RunConfig",
    "SignatureMatrix",
    "SizeError",
    "SystemParams",
    "TanakaBound",
    "TanakaConfig",
    "bpsk_capacity",
    "capacity_bounds",
    "conjectured_upper_bound",
    "load_config",
    "lower_bound",
    "pooled_spectrum",
    "sample_signature",
    "spectrum_report",
    "sum_capacity_estimate",
    "tanaka_bound",
    "tanaka_bound_nearfar",
    "underloaded_capacity",
]
