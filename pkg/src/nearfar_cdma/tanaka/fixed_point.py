"""Replica fixed point (λ, m) and the capacity formula built on it.

    λ = 1 / (v + β(1 - m)),    m = ∫ tanh(√λ z + λ) D_z
    C = (1/2β) log2(1 + β(1 - m)/v) + log2(e)·[λ(1 + m)/2 - ∫ ln cosh(√λ z + λ) D_z]

Binary inputs carry at most one bit: C is evaluated as 1 minus a loss, and a loss below zero from rounding is capped.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from nearfar_cdma.bounds.noise import omega_squared
from nearfar_cdma.config import TanakaConfig
from nearfar_cdma.core.entropy import LOG2E
from nearfar_cdma.core.params import SystemParams
from nearfar_cdma.core.quadrature import QuadratureRule, composite_normal_rule
from nearfar_cdma.errors import BracketFailureError, DomainError, NumericError

logger = logging.getLogger(__name__)

_CHUNK = 512


@dataclass(frozen=True, slots=True)
class TanakaSolution:
    lam: float
    m_mag: float
    capacity_bits: float
    residual: float
    saturated: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {
            "lambda": self.lam,
            "m": self.m_mag,
            "capacity": self.capacity_bits,
            "residual": self.residual,
            "saturated": self.saturated,
        }


@dataclass(frozen=True, slots=True)
class TanakaBound:
    beta: float
    noise_variance: float
    solutions: tuple[TanakaSolution, ...]
    selected: int
    selection: str
    tangency: bool

    @property
    def capacity(self) -> float:
        return self.solutions[self.selected].capacity_bits

    def to_dict(self) -> dict[str, Any]:
        return {
            "beta": self.beta,
            "noise_variance": self.noise_variance,
            "selection": self.selection,
            "selected": self.selected,
            "capacity": self.capacity,
            "tangency": self.tangency,
            "solutions": [s.to_dict() for s in self.solutions],
        }


def _rule(cfg: TanakaConfig) -> QuadratureRule:
    return composite_normal_rule(cfg.panels)


def _lam(m_mag: np.ndarray | float, beta: float, v: float) -> np.ndarray | float:
    return 1.0 / (v + beta * (1.0 - m_mag))


def _fields(lam: np.ndarray, rule: QuadratureRule) -> np.ndarray:
    lam = np.asarray(lam, dtype=float)
    return np.sqrt(lam)[..., None] * rule.nodes + lam[..., None]


def _magnetization(lam: np.ndarray, rule: QuadratureRule) -> np.ndarray:
    """∫ tanh(√λ z + λ) D_z for each λ, evaluated in row chunks."""
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    out = np.empty_like(lam)
    for start in range(0, lam.size, _CHUNK):
        block = lam[start : start + _CHUNK]
        out[start : start + _CHUNK] = np.tanh(_fields(block, rule)) @ rule.weights
    if not np.all(np.isfinite(out)):
        raise NumericError("magnetization integral is not finite")
    return out


def _check_inputs(beta: float, noise_variance: float) -> None:
    if not (beta > 0.0 and math.isfinite(beta)):
        raise DomainError("beta must be finite and > 0")
    if not (noise_variance > 0.0 and math.isfinite(noise_variance)):
        raise DomainError("noise_variance must be finite and > 0")


def magnetization_map(
    m_mag: float,
    beta: float,
    noise_variance: float,
    rule: QuadratureRule | None = None,
) -> float:
    """m ↦ ∫ tanh(√λ z + λ) D_z with λ = 1/(v + β(1 - m))."""
    _check_inputs(beta, noise_variance)
    if not (0.0 <= m_mag < 1.0):
        raise DomainError(f"m must lie in [0, 1), got {m_mag!r}")
    rule = rule or _rule(TanakaConfig())
    return float(_magnetization(np.array([_lam(m_mag, beta, noise_variance)]), rule)[0])


def _capacity(m_mag: float, lam: float, beta: float, v: float, rule: QuadratureRule) -> float:
    # ln cosh x = x - ln 2 + ln(1 + e^{-2x}) with E[x] = λ.
    x = _fields(np.array(lam), rule)
    flip = float(np.logaddexp(0.0, -2.0 * x) @ rule.weights)
    gain = math.log1p(beta * (1.0 - m_mag) / v) / (2.0 * beta)
    loss = (0.5 * lam * (1.0 - m_mag) + flip - gain) * LOG2E
    if not math.isfinite(loss):
        raise NumericError("Tanaka capacity is not finite")
    if loss < 0.0:
        logger.debug("capacity above one bit by %.3e at m=%.17g; capped", -loss, m_mag)
        loss = 0.0
    return 1.0 - loss


def tanaka_capacity(
    sol: TanakaSolution,
    beta: float,
    noise_variance: float,
    rule: QuadratureRule | None = None,
) -> float:
    _check_inputs(beta, noise_variance)
    rule = rule or _rule(TanakaConfig())
    return _capacity(sol.m_mag, sol.lam, beta, noise_variance, rule)


def _bisect(psi, lo: float, hi: float, psi_lo: float, cfg: TanakaConfig) -> float:
    best_m, best_abs = lo, abs(psi_lo)
    for _ in range(cfg.max_bisect):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        p = psi(mid)
        if abs(p) < best_abs:
            best_m, best_abs = mid, abs(p)
        if abs(p) <= cfg.root_tol:
            break
        if (p > 0.0) == (psi_lo > 0.0):
            lo, psi_lo = mid, p
        else:
            hi = mid
    return best_m


def find_fixed_points(
    beta: float,
    noise_variance: float,
    grid: int | None = None,
    cfg: TanakaConfig | None = None,
) -> list[TanakaSolution]:
    """Every root of ψ(m) = map(m) - m on [0, 1), bracketed on a uniform grid.

    ψ(0) ≥ 0 and ψ(m) < 0 as m → 1, so at least one root exists. A root closer
    to 1 than the ε guard (ψ(1-ε) > 0 in floating point) is searched up to the
    largest double below 1 and flagged as saturated.
    """
    cfg = cfg or TanakaConfig()
    grid = cfg.grid if grid is None else grid
    _check_inputs(beta, noise_variance)
    if grid < 64:
        raise DomainError("grid must be >= 64")
    rule = _rule(cfg)

    def psi(m: float) -> float:
        return float(_magnetization(np.array([_lam(m, beta, noise_variance)]), rule)[0]) - m

    ms = np.linspace(0.0, 1.0 - cfg.eps, grid)
    vals = _magnetization(_lam(ms, beta, noise_variance), rule) - ms

    roots: list[tuple[float, bool]] = []
    for i in range(grid):
        if vals[i] == 0.0:
            roots.append((float(ms[i]), False))
        elif i + 1 < grid and vals[i + 1] != 0.0 and (vals[i] > 0.0) != (vals[i + 1] > 0.0):
            roots.append((_bisect(psi, float(ms[i]), float(ms[i + 1]), float(vals[i]), cfg), False))

    if vals[-1] > 0.0:
        top = math.nextafter(1.0, 0.0)
        psi_top = psi(top)
        if psi_top < 0.0:
            roots.append((_bisect(psi, float(ms[-1]), top, float(vals[-1]), cfg), True))
        else:
            roots.append((top, True))
        logger.warning(
            "fixed point above the m = 1 - %g guard (beta=%g, v=%g); reported as saturated",
            cfg.eps, beta, noise_variance,
        )

    if not roots:
        raise BracketFailureError(
            f"no sign change of psi on a {grid}-point grid (beta={beta:g}, v={noise_variance:g})",
            suggested_grid=2 * grid,
        )

    roots.sort()
    unique: list[tuple[float, bool]] = []
    for m, sat in roots:
        if unique and m - unique[-1][0] < cfg.dedup_tol:
            continue
        unique.append((m, sat))

    solutions = []
    for m, sat in unique:
        lam = float(_lam(m, beta, noise_variance))
        residual = abs(psi(m))
        if residual > cfg.residual_tol:
            raise NumericError(f"fixed point m={m:.15g} has residual {residual:.3e} > {cfg.residual_tol:g}")
        solutions.append(
            TanakaSolution(
                lam=lam,
                m_mag=m,
                capacity_bits=_capacity(m, lam, beta, noise_variance, rule),
                residual=residual,
                saturated=sat,
            )
        )
    if len(solutions) % 2 == 0:
        logger.warning("even number (%d) of fixed points: tangential root suspected", len(solutions))
    logger.debug("beta=%g v=%g: %d fixed point(s)", beta, noise_variance, len(solutions))
    return solutions


def select_solution(solutions: list[TanakaSolution], rule: str) -> int:
    if not solutions:
        raise DomainError("no solutions to select from")
    if rule == "min_capacity":
        key = lambda i: (solutions[i].capacity_bits, i)  # noqa: E731
    elif rule == "max_magnetization":
        key = lambda i: (-solutions[i].m_mag, i)  # noqa: E731
    elif rule == "min_magnetization":
        key = lambda i: (solutions[i].m_mag, i)  # noqa: E731
    else:
        raise DomainError(f"unknown selection rule {rule!r}")
    return min(range(len(solutions)), key=key)


def tanaka_bound(beta: float, noise_variance: float, cfg: TanakaConfig | None = None) -> TanakaBound:
    cfg = cfg or TanakaConfig()
    solutions = find_fixed_points(beta, noise_variance, cfg=cfg)
    return TanakaBound(
        beta=beta,
        noise_variance=noise_variance,
        solutions=tuple(solutions),
        selected=select_solution(solutions, cfg.selection),
        selection=cfg.selection,
        tangency=len(solutions) % 2 == 0,
    )


def tanaka_bound_nearfar(p: SystemParams, cfg: TanakaConfig | None = None) -> TanakaBound:
    """Tanaka bound with σ² replaced by ω² = (√β - 1)²ρ² + σ²."""
    if p.beta <= 1.0:
        raise DomainError("the near-far Tanaka bound applies to beta > 1")
    return tanaka_bound(p.beta, omega_squared(p), cfg)
