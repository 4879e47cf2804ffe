"""Lower, conjectured-upper and exact sum-capacity bounds per user."""

from .noise import omega_squared, theta_squared
from .optimizer import InfSupResult, golden_section, lower_bracket, solve_inf_sup
from .capacity import (
    BOUND_FIELDS,
    BoundSet,
    capacity_bounds,
    conjectured_upper_bound,
    gaussian_signalling_cap,
    lower_bound,
    lower_bound_base,
    nearfar_channel_capacity,
    perfect_control_lower,
    perfect_control_upper,
    underloaded_capacity,
)

__all__ = [
    "BOUND_FIELDS",
    "BoundSet",
    "InfSupResult",
    "capacity_bounds",
    "conjectured_upper_bound",
    "gaussian_signalling_cap",
    "golden_section",
    "lower_bound",
    "lower_bound_base",
    "lower_bracket",
    "nearfar_channel_capacity",
    "omega_squared",
    "perfect_control_lower",
    "perfect_control_upper",
    "solve_inf_sup",
    "theta_squared",
    "underloaded_capacity",
]
