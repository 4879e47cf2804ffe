"""Replica-symmetric fixed points and the Tanaka capacity formula."""

from .fixed_point import (
    TanakaBound,
    TanakaSolution,
    find_fixed_points,
    magnetization_map,
    select_solution,
    tanaka_bound,
    tanaka_bound_nearfar,
    tanaka_capacity,
)

__all__ = [
    "TanakaBound",
    "TanakaSolution",
    "find_fixed_points",
    "magnetization_map",
    "select_solution",
    "tanaka_bound",
    "tanaka_bound_nearfar",
    "tanaka_capacity",
]
