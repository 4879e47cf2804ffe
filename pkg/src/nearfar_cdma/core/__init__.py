"""Scalar information-theoretic functions, quadrature and system parameters."""

from .entropy import binary_entropy, bpsk_capacity, gaussian_entropy, shifted_mixture_entropy
from .params import SystemParams, ebn0_db_to_sigma, pcf_db_to_rho
from .quadrature import (
    QuadratureRule,
    adaptive_simpson,
    composite_normal_rule,
    gauss_hermite_rule,
    std_normal_expectation,
)

__all__ = [
    "QuadratureRule",
    "SystemParams",
    "adaptive_simpson",
    "binary_entropy",
    "bpsk_capacity",
    "composite_normal_rule",
    "ebn0_db_to_sigma",
    "gauss_hermite_rule",
    "gaussian_entropy",
    "pcf_db_to_rho",
    "shifted_mixture_entropy",
    "std_normal_expectation",
]
