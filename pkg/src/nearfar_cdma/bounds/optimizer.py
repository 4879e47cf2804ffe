"""Coarse-to-fine solver for inf_{γ>0} sup_{t∈[0,1]} of the lower-bound bracket."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from nearfar_cdma.config import OptimizerConfig
from nearfar_cdma.core.entropy import LOG2E, binary_entropy_array
from nearfar_cdma.errors import DomainError, OptimizerBudgetError

logger = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI_SQ = (3.0 - math.sqrt(5.0)) / 2.0


@dataclass(frozen=True, slots=True)
class InfSupResult:
    value: float
    gamma: float
    t: float
    outer_iterations: int


def golden_section(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    tol: float,
    max_iter: int,
    maximize: bool = False,
) -> tuple[float, float, int]:
    """Golden-section search for an extremum of a unimodal f on [lo, hi].

    Returns (argument, value, iterations). The endpoints are compared too, so a
    monotone f returns its best endpoint.
    """
    if hi < lo:
        raise DomainError("golden_section needs lo <= hi")
    sign = -1.0 if maximize else 1.0

    def g(x: float) -> float:
        return sign * f(x)

    a, b = lo, hi
    c = a + INV_PHI_SQ * (b - a)
    d = a + INV_PHI * (b - a)
    gc, gd = g(c), g(d)
    it = 0
    while b - a > tol:
        if it >= max_iter:
            raise OptimizerBudgetError(
                f"golden-section width {b - a:.3e} above tol {tol:.1e} after {max_iter} iterations"
            )
        if gc < gd:
            b, d, gd = d, c, gc
            c = a + INV_PHI_SQ * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, d, gd
            d = a + INV_PHI * (b - a)
            gd = g(d)
        it += 1

    candidates = [(gc, c), (gd, d), (g(lo), lo), (g(hi), hi)]
    best_g, best_x = min(candidates)
    return best_x, sign * best_g, it


def lower_bracket(t: np.ndarray, gamma: np.ndarray, beta: float, noise_variance: float) -> np.ndarray:
    """H(t) + (1/2β)(γ log2 e - log2(1 + γ(1 + 4tβ/v))), broadcasting t against γ."""
    t = np.asarray(t, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    growth = gamma * (1.0 + 4.0 * t * beta / noise_variance)
    return binary_entropy_array(t) + (gamma * LOG2E - np.log1p(growth) * LOG2E) / (2.0 * beta)


def _inner_sup(gamma: float, beta: float, v: float, t_grid: np.ndarray, cfg: OptimizerConfig) -> tuple[float, float]:
    vals = lower_bracket(t_grid, gamma, beta, v)
    j = int(np.argmax(vals))
    lo = t_grid[max(j - 1, 0)]
    hi = t_grid[min(j + 1, t_grid.size - 1)]
    t_best, sup, _ = golden_section(
        lambda t: float(lower_bracket(t, gamma, beta, v)),
        float(lo),
        float(hi),
        tol=cfg.tol,
        max_iter=cfg.max_iter,
        maximize=True,
    )
    if vals[j] > sup:
        return float(vals[j]), float(t_grid[j])
    return sup, t_best


def solve_inf_sup(beta: float, noise_variance: float, cfg: OptimizerConfig | None = None) -> InfSupResult:
    """inf over γ > 0 of sup over t ∈ [0, 1] of `lower_bracket`.

    The outer function is a supremum of functions convex in γ, hence unimodal;
    a log-spaced γ scan locates the basin and golden-section refines ln γ.
    """
    cfg = cfg or OptimizerConfig()
    if not (beta > 0.0):
        raise DomainError("beta must be > 0")
    if not (noise_variance > 0.0 and math.isfinite(noise_variance)):
        raise DomainError("noise_variance must be finite and > 0")

    t_grid = np.linspace(0.0, 1.0, cfg.t_grid)
    u_grid = np.linspace(math.log(cfg.gamma_min), math.log(cfg.gamma_max), cfg.gamma_grid)
    coarse = lower_bracket(t_grid[None, :], np.exp(u_grid)[:, None], beta, noise_variance).max(axis=1)
    k = int(np.argmin(coarse))

    def outer(u: float) -> float:
        return _inner_sup(math.exp(u), beta, noise_variance, t_grid, cfg)[0]

    u_lo = float(u_grid[max(k - 1, 0)])
    u_hi = float(u_grid[min(k + 1, u_grid.size - 1)])
    u_best, value, iters = golden_section(outer, u_lo, u_hi, tol=cfg.tol, max_iter=cfg.max_iter)
    gamma = math.exp(u_best)
    _, t_best = _inner_sup(gamma, beta, noise_variance, t_grid, cfg)
    logger.debug(
        "inf-sup beta=%g v=%g: value=%.12g gamma=%.6g t=%.6g (%d outer iterations)",
        beta, noise_variance, value, gamma, t_best, iters,
    )
    return InfSupResult(value=value, gamma=gamma, t=t_best, outer_iterations=iters)
