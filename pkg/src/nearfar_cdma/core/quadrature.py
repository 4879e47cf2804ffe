"""Quadrature against the standard normal measure.

A `QuadratureRule` holds nodes z_i and weights w_i normalised so that

    E[f(Z)] = ∫ f(z) D_Z ≈ Σ w_i f(z_i),    Σ w_i = 1.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.hermite import hermgauss
from numpy.polynomial.legendre import leggauss

from nearfar_cdma.errors import DomainError, NumericError

logger = logging.getLogger(__name__)

DEFAULT_ORDER = 64

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


@dataclass(frozen=True, slots=True, eq=False)
class QuadratureRule:
    order: int
    nodes: np.ndarray
    weights: np.ndarray
    kind: str = "gauss-hermite"


def _symmetrize(nodes: np.ndarray, weights: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    order = np.argsort(nodes)
    z = nodes[order]
    w = weights[order]
    z = 0.5 * (z - z[::-1])
    w = 0.5 * (w + w[::-1])
    w = w / w.sum()
    z.setflags(write=False)
    w.setflags(write=False)
    return z, w


@lru_cache(maxsize=16)
def gauss_hermite_rule(order: int = DEFAULT_ORDER) -> QuadratureRule:
    """Probabilist Gauss–Hermite rule: exact for polynomials of degree < 2*order."""
    if order < 1:
        raise DomainError("quadrature order must be >= 1")
    x, w = hermgauss(order)
    z, w = _symmetrize(math.sqrt(2.0) * x, w / math.sqrt(math.pi))
    logger.debug("built Gauss-Hermite rule, order=%d", order)
    return QuadratureRule(order=order, nodes=z, weights=w, kind="gauss-hermite")


@lru_cache(maxsize=16)
def composite_normal_rule(
    panels: int = 64,
    points_per_panel: int = 16,
    half_width: float = 10.0,
) -> QuadratureRule:
    """Composite Gauss–Legendre rule on [-half_width, half_width] weighted by the normal density.

    Resolves integrands with singularities close to the real axis
    (tanh, ln cosh at large λ) where a single Gauss–Hermite rule converges slowly.
    The truncated tail mass is 2Φ(-half_width) (≈1.5e-23 at the default width).
    """
    if panels < 1 or points_per_panel < 1:
        raise DomainError("panels and points_per_panel must be >= 1")
    if half_width <= 0.0:
        raise DomainError("half_width must be > 0")
    x, w = leggauss(points_per_panel)
    edges = np.linspace(-half_width, half_width, panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel() * _INV_SQRT_2PI * np.exp(-0.5 * nodes * nodes)
    z, w = _symmetrize(nodes, weights)
    logger.debug("built composite normal rule, panels=%d, points=%d", panels, points_per_panel)
    return QuadratureRule(order=z.size, nodes=z, weights=w, kind="composite-legendre")


def std_normal_expectation(
    integrand: Callable[[np.ndarray], np.ndarray | float],
    rule: QuadratureRule | None = None,
) -> float:
    """Return Σ w_i f(z_i); `integrand` is called once on the full node array."""
    if rule is None:
        rule = gauss_hermite_rule(DEFAULT_ORDER)
    values = np.asarray(integrand(rule.nodes), dtype=float)
    if values.shape != rule.nodes.shape:
        values = np.broadcast_to(values, rule.nodes.shape)
    if not np.all(np.isfinite(values)):
        raise NumericError("integrand returned a non-finite value at a quadrature node")
    return float(rule.weights @ values)


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-10,
    max_depth: int = 60,
) -> float:
    """Adaptive Simpson integration of a scalar function over [a, b]."""

    def simpson(fa: float, fm: float, fb: float, width: float) -> float:
        return width * (fa + 4.0 * fm + fb) / 6.0

    def recurse(a: float, b: float, fa: float, fm: float, fb: float, whole: float, tol: float, depth: int) -> float:
        m = 0.5 * (a + b)
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm = f(lm)
        frm = f(rm)
        left = simpson(fa, flm, fm, m - a)
        right = simpson(fm, frm, fb, b - m)
        delta = left + right - whole
        if depth <= 0 or abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0
        return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + recurse(
            m, b, fm, frm, fb, right, 0.5 * tol, depth - 1
        )

    if not (b > a):
        raise DomainError("adaptive_simpson needs b > a")
    fa, fb = f(a), f(b)
    fm = f(0.5 * (a + b))
    total = recurse(a, b, fa, fm, fb, simpson(fa, fm, fb, b - a), tol, max_depth)
    if not math.isfinite(total):
        raise NumericError("adaptive_simpson produced a non-finite value")
    return total
