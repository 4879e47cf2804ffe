"""Finite-size Monte-Carlo mutual information, the ground truth for the asymptotic bounds."""

from .mutual_info import (
    EffectiveCovariance,
    MiEstimate,
    TrendPoint,
    conditional_entropy,
    effective_covariance,
    finite_size_trend,
    output_entropy_mc,
    sandwich_verdict,
    sum_capacity_estimate,
)

__all__ = [
    "EffectiveCovariance",
    "MiEstimate",
    "TrendPoint",
    "conditional_entropy",
    "effective_covariance",
    "finite_size_trend",
    "output_entropy_mc",
    "sandwich_verdict",
    "sum_capacity_estimate",
]
