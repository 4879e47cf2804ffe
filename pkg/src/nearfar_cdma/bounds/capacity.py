"""Sum-capacity bounds per user, in bits, for binary CDMA with Gaussian near-far fluctuation."""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Any

from nearfar_cdma.bounds.noise import omega_squared, theta_squared
from nearfar_cdma.bounds.optimizer import solve_inf_sup
from nearfar_cdma.config import OptimizerConfig, TanakaConfig
from nearfar_cdma.core.entropy import LOG2E, bpsk_capacity, gaussian_entropy, shifted_mixture_entropy
from nearfar_cdma.core.params import SystemParams
from nearfar_cdma.errors import DomainError

logger = logging.getLogger(__name__)

BOUND_FIELDS = ("lower", "upper_conjectured", "upper_tanaka", "exact")


def _clamp(x: float | None) -> float | None:
    if x is None:
        return None
    return min(max(x, 0.0), 1.0)


@dataclass(frozen=True, slots=True)
class BoundSet:
    """Bounds at one SystemParams point; None marks a bound that was not evaluated."""

    beta: float
    sigma: float
    rho: float
    theta2: float
    omega2: float
    lower_raw: float | None
    upper_conjectured: float | None
    upper_tanaka_raw: float | None
    exact: float | None
    tanaka_solutions: int = 0

    @property
    def lower(self) -> float | None:
        return _clamp(self.lower_raw)

    @property
    def upper_tanaka(self) -> float | None:
        return _clamp(self.upper_tanaka_raw)

    def to_dict(self) -> dict[str, Any]:
        return {
            "beta": self.beta,
            "sigma": self.sigma,
            "rho": self.rho,
            "lower_raw": self.lower_raw,
            "lower": self.lower,
            "upper_conjectured": self.upper_conjectured,
            "upper_tanaka_raw": self.upper_tanaka_raw,
            "upper_tanaka": self.upper_tanaka,
            "exact": self.exact,
            "theta2": self.theta2,
            "omega2": self.omega2,
            "tanaka_solutions": self.tanaka_solutions,
        }


def _require_overloaded(beta: float) -> None:
    if not (beta > 1.0):
        raise DomainError(f"bounds apply to the overloaded regime beta > 1, got {beta!r}")


def lower_bound_base(beta: float, noise_variance: float, opt: OptimizerConfig | None = None) -> float:
    """1 - inf_γ sup_t [H(t) + (1/2β)(γ log2 e - log2(1 + γ(1 + 4tβ/v)))]."""
    _require_overloaded(beta)
    return 1.0 - solve_inf_sup(beta, noise_variance, opt).value


def lower_bound(p: SystemParams, opt: OptimizerConfig | None = None) -> float:
    """Base lower bound evaluated at the worst-case effective noise θ²."""
    return lower_bound_base(p.beta, theta_squared(p), opt)


def nearfar_channel_capacity(rho: float) -> float:
    """h(ĝ) - h(g): capacity of the ±1 + Z channel alone; 1 bit when rho = 0."""
    if rho < 0.0:
        raise DomainError("rho must be >= 0")
    if rho == 0.0:
        return 1.0
    v = rho * rho
    return shifted_mixture_entropy(v) - gaussian_entropy(v)


def gaussian_signalling_cap(beta: float, noise_variance: float) -> float:
    """(1/2β) log2(1 + β/v)."""
    return math.log1p(beta / noise_variance) * LOG2E / (2.0 * beta)


def conjectured_upper_bound(p: SystemParams) -> float:
    _require_overloaded(p.beta)
    return min(nearfar_channel_capacity(p.rho), gaussian_signalling_cap(p.beta, omega_squared(p)))


def perfect_control_lower(beta: float, sigma: float, opt: OptimizerConfig | None = None) -> float:
    return lower_bound_base(beta, sigma * sigma, opt)


def perfect_control_upper(beta: float, sigma: float) -> float:
    _require_overloaded(beta)
    return min(1.0, gaussian_signalling_cap(beta, sigma * sigma))


def underloaded_capacity(p: SystemParams) -> float:
    """Exact value for beta <= 1: orthogonal signatures turn the system into BPSK with noise σ² + ρ²."""
    if p.beta > 1.0:
        raise DomainError("underloaded_capacity applies to beta <= 1")
    return bpsk_capacity(p.noise_variance + p.nearfar_variance)


def capacity_bounds(
    p: SystemParams,
    opt: OptimizerConfig | None = None,
    tanaka_cfg: TanakaConfig | None = None,
    outputs: Iterable[str] | None = None,
) -> BoundSet:
    """Exact value for beta <= 1, otherwise the lower, conjectured and Tanaka bounds.

    `outputs` restricts the overloaded computation to a subset of BOUND_FIELDS.
    """
    wanted = set(BOUND_FIELDS if outputs is None else outputs)
    unknown = wanted - set(BOUND_FIELDS)
    if unknown:
        raise DomainError(f"unknown outputs: {', '.join(sorted(unknown))}")
    theta2 = theta_squared(p)
    omega2 = omega_squared(p)

    if p.beta <= 1.0:
        exact = underloaded_capacity(p)
        return BoundSet(
            beta=p.beta, sigma=p.sigma, rho=p.rho, theta2=theta2, omega2=omega2,
            lower_raw=exact, upper_conjectured=exact, upper_tanaka_raw=exact, exact=exact,
        )

    # Imported here: the tanaka package depends on bounds.noise.
    from nearfar_cdma.tanaka.fixed_point import tanaka_bound_nearfar

    lower = lower_bound(p, opt) if "lower" in wanted else None
    upper_conj = conjectured_upper_bound(p) if "upper_conjectured" in wanted else None
    tanaka = tanaka_bound_nearfar(p, tanaka_cfg) if "upper_tanaka" in wanted else None
    logger.debug("bounds at beta=%g sigma=%g rho=%g computed", p.beta, p.sigma, p.rho)
    return BoundSet(
        beta=p.beta, sigma=p.sigma, rho=p.rho, theta2=theta2, omega2=omega2,
        lower_raw=lower,
        upper_conjectured=upper_conj,
        upper_tanaka_raw=None if tanaka is None else tanaka.capacity,
        exact=None,
        tanaka_solutions=0 if tanaka is None else len(tanaka.solutions),
    )
