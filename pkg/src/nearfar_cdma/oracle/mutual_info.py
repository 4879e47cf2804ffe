"""Exact-density Monte-Carlo estimate of I(X; Y) for small binary CDMA systems.

    Y = (1/√m) A (X + Z) + N,    X uniform on {±1}^n,  Z ~ N(0, ρ²I),  N ~ N(0, σ²I)

Given X the output is Gaussian with covariance (ρ²/m) A Aᵀ + σ² I, so h(Y|X) is
closed-form and only h(Y) is estimated. Every sample is scored against all 2^n
mixture components.
"""

from __future__ import annotations

import logging
import math
import multiprocessing
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy.linalg import solve_triangular
from scipy.special import logsumexp

from nearfar_cdma.config import OracleConfig
from nearfar_cdma.core.entropy import LOG2E
from nearfar_cdma.core.rng import ORACLE_STREAM, stream
from nearfar_cdma.errors import DomainError, NumericError, SizeError
from nearfar_cdma.spectral.signature import SignatureMatrix, sample_signature

logger = logging.getLogger(__name__)

MIN_SAMPLES = 1_000
MAX_USERS = 20

# Upper limit on batch × component entries held in memory at once.
_BLOCK_ENTRIES = 1 << 22
_LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True, slots=True, eq=False)
class EffectiveCovariance:
    """(ρ²/m)·A·Aᵀ + σ²·I with its lower Cholesky factor and natural-log determinant."""

    matrix: np.ndarray
    log_det: float
    factor: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])


@dataclass(frozen=True, slots=True)
class MiEstimate:
    bits_per_user: float
    std_error: float
    samples: int
    seed: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "bits_per_user": self.bits_per_user,
            "std_error": self.std_error,
            "samples": self.samples,
            "seed": self.seed,
        }


@dataclass(frozen=True, slots=True)
class TrendPoint:
    m: int
    n: int
    mean_bits_per_user: float
    std_error: float
    estimates: tuple[MiEstimate, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "m": self.m,
            "n": self.n,
            "mean_bits_per_user": self.mean_bits_per_user,
            "std_error": self.std_error,
            "estimates": [e.to_dict() for e in self.estimates],
        }


def effective_covariance(A: SignatureMatrix, sigma: float, rho: float) -> EffectiveCovariance:
    if not (sigma > 0.0 and math.isfinite(sigma)):
        raise DomainError("sigma must be finite and > 0")
    if not (rho >= 0.0 and math.isfinite(rho)):
        raise DomainError("rho must be finite and >= 0")
    matrix = rho * rho * A.gram() + sigma * sigma * np.eye(A.m)
    matrix = 0.5 * (matrix + matrix.T)
    try:
        factor = np.linalg.cholesky(matrix)
    except np.linalg.LinAlgError as e:
        raise NumericError(f"effective covariance is not positive definite: {e}") from e
    log_det = 2.0 * float(np.sum(np.log(np.diag(factor))))
    matrix.setflags(write=False)
    factor.setflags(write=False)
    return EffectiveCovariance(matrix=matrix, log_det=log_det, factor=factor)


def conditional_entropy(cov: EffectiveCovariance) -> float:
    """h(Y | X) = ½ log2((2πe)^m det cov), in bits."""
    return 0.5 * (cov.dim * math.log2(2.0 * math.pi * math.e) + cov.log_det * LOG2E)


def _codewords(start: int, stop: int, n: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    bits = (idx[:, None] >> np.arange(n, dtype=np.int64)) & 1
    return (2 * bits - 1).astype(float)


def _batch_neg_log2_density(
    whitened_code: np.ndarray,
    log_norm: float,
    seed: int,
    batch_index: int,
    size: int,
) -> np.ndarray:
    """-log2 p(Y) for one batch drawn from stream (seed, ORACLE_STREAM, batch_index).

    Works in whitened coordinates: L⁻¹Y = C X + ξ with C = L⁻¹A/√m and ξ ~ N(0, I).
    """
    m, n = whitened_code.shape
    rng = stream(seed, ORACLE_STREAM, batch_index)
    x = 2.0 * rng.integers(0, 2, size=(size, n)) - 1.0
    w = x @ whitened_code.T + rng.standard_normal((size, m))
    w_sq = np.einsum("ij,ij->i", w, w)

    total = 1 << n
    chunk = max(1, min(total, _BLOCK_ENTRIES // size))
    acc = np.full(size, -np.inf)
    for start in range(0, total, chunk):
        centers = _codewords(start, min(start + chunk, total), n) @ whitened_code.T
        c_sq = np.einsum("ij,ij->i", centers, centers)
        dist = w_sq[:, None] - 2.0 * (w @ centers.T) + c_sq[None, :]
        acc = np.logaddexp(acc, logsumexp(-0.5 * dist, axis=1))
    log_p = log_norm + acc
    if not np.all(np.isfinite(log_p)):
        raise NumericError("non-finite log-density in Monte-Carlo batch")
    return -log_p * LOG2E


def _batch_job(args: tuple[np.ndarray, float, int, int, int]) -> np.ndarray:
    return _batch_neg_log2_density(*args)


def _check_oracle_inputs(A: SignatureMatrix, samples: int, cfg: OracleConfig) -> None:
    cap = min(cfg.max_users, MAX_USERS)
    if A.n > cap:
        raise SizeError(f"exact enumeration needs n <= {cap}, got n = {A.n}")
    if samples < MIN_SAMPLES:
        raise DomainError(f"samples must be >= {MIN_SAMPLES}, got {samples}")


def output_entropy_mc(
    A: SignatureMatrix,
    sigma: float,
    rho: float,
    samples: int,
    seed: int,
    cfg: OracleConfig | None = None,
    jobs: int = 1,
) -> tuple[float, float]:
    """(mean of -log2 p(Y), its standard error) over `samples` draws.

    Batches have a fixed size and batch b always uses stream (seed, b), so the
    estimate does not depend on `jobs`.
    """
    cfg = cfg or OracleConfig()
    _check_oracle_inputs(A, samples, cfg)
    if jobs < 1:
        raise DomainError("jobs must be >= 1")
    cov = effective_covariance(A, sigma, rho)
    whitened_code = solve_triangular(cov.factor, A.scaled(), lower=True)
    log_norm = -A.n * math.log(2.0) - 0.5 * A.m * _LOG_2PI - 0.5 * cov.log_det

    sizes = [min(cfg.batch_size, samples - start) for start in range(0, samples, cfg.batch_size)]
    tasks = [(whitened_code, log_norm, seed, b, size) for b, size in enumerate(sizes)]
    logger.info("oracle m=%d n=%d: %d samples in %d batches, jobs=%d", A.m, A.n, samples, len(tasks), jobs)
    if jobs == 1:
        parts = [_batch_job(t) for t in tasks]
    else:
        # spawn: forked workers can inherit a BLAS lock held by a parent thread.
        with ProcessPoolExecutor(max_workers=jobs, mp_context=multiprocessing.get_context("spawn")) as pool:
            parts = list(pool.map(_batch_job, tasks))

    draws = np.concatenate(parts)
    mean = float(draws.mean())
    std_error = float(draws.std(ddof=1) / math.sqrt(draws.size))
    return mean, std_error


def sum_capacity_estimate(
    A: SignatureMatrix,
    sigma: float,
    rho: float,
    samples: int,
    seed: int,
    cfg: OracleConfig | None = None,
    jobs: int = 1,
) -> MiEstimate:
    """Per-user I(X; Y) at uniform inputs, a lower estimate of the per-user sum capacity."""
    h_y, se = output_entropy_mc(A, sigma, rho, samples, seed, cfg, jobs)
    h_y_given_x = conditional_entropy(effective_covariance(A, sigma, rho))
    return MiEstimate(
        bits_per_user=(h_y - h_y_given_x) / A.n,
        std_error=se / A.n,
        samples=samples,
        seed=seed,
    )


def sandwich_verdict(estimate: MiEstimate, upper: float, slack: float = 0.15) -> str:
    """Place an estimate against an asymptotic upper bound with 3σ Monte-Carlo tolerance."""
    tol = 3.0 * estimate.std_error
    if estimate.bits_per_user < -tol:
        return "outside"
    if estimate.bits_per_user <= upper + tol:
        return "inside"
    if estimate.bits_per_user <= upper + tol + slack:
        return "inside-with-slack"
    return "outside"


def finite_size_trend(
    beta: float,
    sizes: Sequence[int],
    sigma: float,
    rho: float,
    samples: int,
    seeds: Sequence[int],
    cfg: OracleConfig | None = None,
    jobs: int = 1,
) -> list[TrendPoint]:
    """Oracle estimates at (m, βm) for each m in `sizes`, averaged over signature seeds.

    Seed s draws both the signature matrix and the Monte-Carlo samples, from
    separate streams.
    """
    if not seeds:
        raise DomainError("finite_size_trend needs at least one seed")
    points = []
    for m in sizes:
        n_float = beta * m
        n = int(round(n_float))
        if n < 1 or abs(n - n_float) > 1e-9:
            raise DomainError(f"beta * m must be a positive integer, got {n_float!r} for m = {m}")
        estimates = tuple(
            sum_capacity_estimate(sample_signature(m, n, s), sigma, rho, samples, s, cfg, jobs) for s in seeds
        )
        bits = np.array([e.bits_per_user for e in estimates])
        errs = np.array([e.std_error for e in estimates])
        points.append(
            TrendPoint(
                m=m,
                n=n,
                mean_bits_per_user=float(bits.mean()),
                std_error=float(math.sqrt(float(np.sum(errs**2))) / len(estimates)),
                estimates=estimates,
            )
        )
        logger.info("trend m=%d n=%d: %.6f bits/user", m, n, points[-1].mean_bits_per_user)
    return points
