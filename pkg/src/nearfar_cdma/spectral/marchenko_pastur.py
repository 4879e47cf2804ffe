"""Marčenko–Pastur law with ratio beta.

`mp_density`/`mp_cdf` describe f_β, the limit law of HᵀH for an N×K matrix H
with variance-1/N entries and K/N → β; it carries a point mass (1 - 1/β)⁺ at 0.

The chip-domain Gram matrix (1/m)AAᵀ of an m×n signature matrix is the
companion HHᵀ. Its limit law has the same edges, continuous density
√((x-a)(b-x))/(2πx) and a point mass (1 - β)⁺ at 0; on x ≥ 0 its CDF equals
β·F_β(x) - (β - 1). `gram_mp_cdf` returns that law.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.interpolate import PchipInterpolator

from nearfar_cdma.errors import DomainError

CDF_TABLE_POINTS = 10_000


def _check_beta(beta: float) -> None:
    if not (beta > 0.0 and math.isfinite(beta)):
        raise DomainError(f"beta must be finite and > 0, got {beta!r}")


def mp_edges(beta: float) -> tuple[float, float]:
    _check_beta(beta)
    r = math.sqrt(beta)
    return (1.0 - r) ** 2, (1.0 + r) ** 2


def mp_point_mass(beta: float) -> float:
    _check_beta(beta)
    return max(1.0 - 1.0 / beta, 0.0)


def mp_density(x: float | np.ndarray, beta: float) -> float | np.ndarray:
    """Absolutely continuous part of f_β; zero outside the open support (a, b)."""
    a, b = mp_edges(beta)
    xs = np.asarray(x, dtype=float)
    inside = (xs > a) & (xs < b) & (xs > 0.0)
    safe = np.where(inside, xs, 1.0)
    dens = np.where(inside, np.sqrt(np.clip((safe - a) * (b - safe), 0.0, None)) / (2.0 * math.pi * beta * safe), 0.0)
    if np.ndim(x) == 0:
        return float(dens)
    return dens


@lru_cache(maxsize=64)
def _continuous_cdf_table(beta: float) -> tuple[np.ndarray, np.ndarray]:
    """Tabulate ∫_a^x f_β on CDF_TABLE_POINTS points.

    The substitution x = a + (b - a)(1 - cos θ)/2 removes the square-root
    edge singularities (and the 1/√x one at β = 1), so the trapezoid rule
    in θ converges fast.
    """
    a, b = mp_edges(beta)
    theta = np.linspace(0.0, math.pi, CDF_TABLE_POINTS)
    half = 0.5 * (b - a)
    x = a + half * (1.0 - np.cos(theta))
    # f(x)·dx/dθ = half² sin²θ / (2πβx)
    integrand = np.zeros_like(theta)
    ok = x > 0.0
    integrand[ok] = half * half * np.sin(theta[ok]) ** 2 / (2.0 * math.pi * beta * x[ok])
    if a == 0.0:
        # β = 1: half² sin²θ / x = 2(1 + cos θ) → 4 at θ = 0.
        integrand[0] = 4.0 / (2.0 * math.pi * beta)
    cdf = cumulative_trapezoid(integrand, theta, initial=0.0)
    return x, np.maximum.accumulate(cdf)


@lru_cache(maxsize=64)
def _continuous_cdf(beta: float) -> PchipInterpolator:
    x, cdf = _continuous_cdf_table(beta)
    # Drop duplicate abscissae at the θ endpoints before interpolating.
    keep = np.concatenate(([True], np.diff(x) > 0.0))
    return PchipInterpolator(x[keep], cdf[keep], extrapolate=False)


def mp_cdf(x: float | np.ndarray, beta: float) -> float | np.ndarray:
    """CDF of f_β, point mass included."""
    a, b = mp_edges(beta)
    xs = np.asarray(x, dtype=float)
    interp = _continuous_cdf(float(beta))
    total = _continuous_cdf_table(float(beta))[1][-1]
    cont = np.where(xs <= a, 0.0, np.where(xs >= b, total, np.nan_to_num(interp(np.clip(xs, a, b)))))
    out = np.where(xs >= 0.0, mp_point_mass(beta) + cont, 0.0)
    out = np.clip(out, 0.0, 1.0)
    if np.ndim(x) == 0:
        return float(out)
    return out


def gram_mp_cdf(x: float | np.ndarray, beta: float) -> float | np.ndarray:
    """Limit CDF of the spectrum of (1/m)AAᵀ with beta = n/m."""
    xs = np.asarray(x, dtype=float)
    f = np.asarray(mp_cdf(xs, beta), dtype=float)
    out = np.where(xs >= 0.0, np.clip(beta * f - (beta - 1.0), 0.0, 1.0), 0.0)
    if np.ndim(x) == 0:
        return float(out)
    return out
