"""Effective noise variances from the extreme eigenvalues of (ρ²/m)AAᵀ + σ²I.

As m, n → ∞ with n/m → β the spectrum of (1/m)AAᵀ fills [(1-√β)², (1+√β)²],
so the noise covariance of the near-far channel lies between ω²I and θ²I.
"""

from __future__ import annotations

import math

from nearfar_cdma.core.params import SystemParams


def theta_squared(p: SystemParams) -> float:
    """Worst-case (largest) effective noise variance (√β + 1)²ρ² + σ²."""
    return (math.sqrt(p.beta) + 1.0) ** 2 * p.nearfar_variance + p.noise_variance


def omega_squared(p: SystemParams) -> float:
    """Best-case (smallest) effective noise variance (√β - 1)²ρ² + σ²."""
    return (math.sqrt(p.beta) - 1.0) ** 2 * p.nearfar_variance + p.noise_variance
