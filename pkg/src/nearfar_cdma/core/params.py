from __future__ import annotations

import math
from dataclasses import dataclass

from nearfar_cdma.errors import DomainError


@dataclass(frozen=True, slots=True)
class SystemParams:
    """Load ratio beta = n/m, per-chip noise std sigma, near-far std rho.

    The noise N and the near-far perturbation Z are zero-mean Gaussians; the
    received amplitude of every user is 1 + Z.
    """

    beta: float
    sigma: float
    rho: float

    def __post_init__(self) -> None:
        if not (self.beta > 0.0 and math.isfinite(self.beta)):
            raise DomainError(f"beta must be finite and > 0, got {self.beta!r}")
        if not (self.sigma > 0.0 and math.isfinite(self.sigma)):
            raise DomainError(f"sigma must be finite and > 0, got {self.sigma!r}")
        if not (self.rho >= 0.0 and math.isfinite(self.rho)):
            raise DomainError(f"rho must be finite and >= 0, got {self.rho!r}")

    @property
    def noise_variance(self) -> float:
        return self.sigma * self.sigma

    @property
    def nearfar_variance(self) -> float:
        return self.rho * self.rho

    @property
    def pcf_db(self) -> float:
        """Power control factor in dB (inf under perfect power control)."""
        return rho_to_pcf_db(self.rho)

    @property
    def ebn0_db(self) -> float:
        return sigma_to_ebn0_db(self.sigma)

    @classmethod
    def from_db(cls, beta: float, *, ebn0_db: float, pcf_db: float | None = None) -> SystemParams:
        rho = 0.0 if pcf_db is None else pcf_db_to_rho(pcf_db)
        return cls(beta=beta, sigma=ebn0_db_to_sigma(ebn0_db), rho=rho)


def pcf_db_to_rho(pcf_db: float) -> float:
    """PCF_dB = 10 log10(mean² / var) with the amplitude mean fixed at 1."""
    return 10.0 ** (-pcf_db / 20.0)


def rho_to_pcf_db(rho: float) -> float:
    if rho < 0.0:
        raise DomainError("rho must be >= 0")
    if rho == 0.0:
        return math.inf
    return -20.0 * math.log10(rho)


def ebn0_db_to_sigma(ebn0_db: float) -> float:
    """E_b = 1 per user and N_0 = 2σ², so E_b/N_0 = 1/(2σ²)."""
    return math.sqrt(10.0 ** (-ebn0_db / 10.0) / 2.0)


def sigma_to_ebn0_db(sigma: float) -> float:
    if sigma <= 0.0:
        raise DomainError("sigma must be > 0")
    return 10.0 * math.log10(1.0 / (2.0 * sigma * sigma))
