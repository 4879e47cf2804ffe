from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from nearfar_cdma.errors import DomainError
from nearfar_cdma.spectral.marchenko_pastur import gram_mp_cdf, mp_edges
from nearfar_cdma.spectral.signature import SignatureMatrix, gram_eigenvalues, sample_signature

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class SpectralReport:
    m: int
    n: int
    seed: int | None
    beta: float
    eigenvalues: tuple[float, ...]
    mp_lower_edge: float
    mp_upper_edge: float
    min_eig: float
    max_eig: float
    ks_distance: float
    trace: float

    def to_dict(self, *, include_eigenvalues: bool = False) -> dict[str, Any]:
        out: dict[str, Any] = {
            "m": self.m,
            "n": self.n,
            "seed": self.seed,
            "beta": self.beta,
            "mp_lower_edge": self.mp_lower_edge,
            "mp_upper_edge": self.mp_upper_edge,
            "min_eig": self.min_eig,
            "max_eig": self.max_eig,
            "ks_distance": self.ks_distance,
            "trace": self.trace,
        }
        if include_eigenvalues:
            out["eigenvalues"] = list(self.eigenvalues)
        return out


@dataclass(frozen=True, slots=True)
class PooledSpectralReport:
    m: int
    n: int
    seeds: tuple[int, ...]
    beta: float
    mp_lower_edge: float
    mp_upper_edge: float
    mean_min_eig: float
    mean_max_eig: float
    extreme_min_eig: float
    extreme_max_eig: float
    min_edge_rel_dev: float | None
    max_edge_rel_dev: float
    pooled_ks_distance: float
    max_trace_error: float
    trials: tuple[SpectralReport, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "m": self.m,
            "n": self.n,
            "seeds": list(self.seeds),
            "beta": self.beta,
            "mp_lower_edge": self.mp_lower_edge,
            "mp_upper_edge": self.mp_upper_edge,
            "mean_min_eig": self.mean_min_eig,
            "mean_max_eig": self.mean_max_eig,
            "extreme_min_eig": self.extreme_min_eig,
            "extreme_max_eig": self.extreme_max_eig,
            "min_edge_rel_dev": self.min_edge_rel_dev,
            "max_edge_rel_dev": self.max_edge_rel_dev,
            "pooled_ks_distance": self.pooled_ks_distance,
            "max_trace_error": self.max_trace_error,
            "trials": [t.to_dict() for t in self.trials],
        }


def ks_distance(sorted_values: np.ndarray, cdf: Callable[[np.ndarray], np.ndarray]) -> float:
    """sup |F_emp - F| evaluated at the jump points of the empirical CDF."""
    x = np.sort(np.asarray(sorted_values, dtype=float))
    if x.size == 0:
        raise DomainError("ks_distance needs at least one value")
    f = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, x.size + 1, dtype=float)
    above = np.max(i / x.size - f)
    below = np.max(f - (i - 1.0) / x.size)
    return float(np.clip(max(above, below), 0.0, 1.0))


def spectrum_report(A: SignatureMatrix) -> SpectralReport:
    vals = gram_eigenvalues(A)
    beta = A.beta
    a, b = mp_edges(beta)
    ks = ks_distance(vals, lambda x: gram_mp_cdf(x, beta))
    return SpectralReport(
        m=A.m,
        n=A.n,
        seed=A.seed,
        beta=beta,
        eigenvalues=tuple(float(v) for v in vals),
        mp_lower_edge=a,
        mp_upper_edge=b,
        min_eig=float(vals[0]),
        max_eig=float(vals[-1]),
        ks_distance=ks,
        trace=float(vals.sum()),
    )


def pooled_spectrum(m: int, n: int, seeds: Sequence[int]) -> PooledSpectralReport:
    """Aggregate independent trials; the pooled KS uses every eigenvalue of every trial."""
    if not seeds:
        raise DomainError("pooled_spectrum needs at least one seed")
    return pool_reports([spectrum_report(sample_signature(m, n, s)) for s in seeds])


def pool_reports(reports: Sequence[SpectralReport]) -> PooledSpectralReport:
    if not reports:
        raise DomainError("pool_reports needs at least one report")
    trials = tuple(reports)
    m, n = trials[0].m, trials[0].n
    if any((t.m, t.n) != (m, n) for t in trials):
        raise DomainError("pooled reports must share (m, n)")
    seeds = [t.seed for t in trials]
    if any(s is None for s in seeds):
        raise DomainError("pooled reports must come from seeded matrices")
    beta = n / m
    a, b = mp_edges(beta)
    pooled = np.concatenate([np.asarray(t.eigenvalues) for t in trials])
    mins = np.array([t.min_eig for t in trials])
    maxs = np.array([t.max_eig for t in trials])
    mean_min = float(mins.mean())
    mean_max = float(maxs.mean())
    logger.info("pooled spectrum m=%d n=%d over %d trials", m, n, len(trials))
    return PooledSpectralReport(
        m=m,
        n=n,
        seeds=tuple(int(s) for s in seeds),
        beta=beta,
        mp_lower_edge=a,
        mp_upper_edge=b,
        mean_min_eig=mean_min,
        mean_max_eig=mean_max,
        extreme_min_eig=float(mins.min()),
        extreme_max_eig=float(maxs.max()),
        min_edge_rel_dev=(mean_min - a) / a if a > 0.0 else None,
        max_edge_rel_dev=(mean_max - b) / b,
        pooled_ks_distance=ks_distance(pooled, lambda x: gram_mp_cdf(x, beta)),
        max_trace_error=float(max(abs(t.trace - n) for t in trials)),
        trials=trials,
    )
