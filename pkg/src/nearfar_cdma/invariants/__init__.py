"""Hard-failing audits: quadrature weights, spectral traces, fixed-point residuals, bound ordering and oracle estimates."""

from .audit import (
    audit_bound_set,
    audit_effective_covariance,
    audit_mi_estimate,
    audit_quadrature_rule,
    audit_spectral_report,
    audit_tanaka_bound,
    audit_tanaka_solution,
)

__all__ = [
    "audit_bound_set",
    "audit_effective_covariance",
    "audit_mi_estimate",
    "audit_quadrature_rule",
    "audit_spectral_report",
    "audit_tanaka_bound",
    "audit_tanaka_solution",
]
