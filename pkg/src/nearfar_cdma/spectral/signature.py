from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import hadamard

from nearfar_cdma.core.rng import SIGNATURE_STREAM, stream
from nearfar_cdma.errors import DomainError, NumericError

logger = logging.getLogger(__name__)

EIG_RESIDUAL_TOL = 1e-8


@dataclass(frozen=True, slots=True, eq=False)
class SignatureMatrix:
    """Unscaled m×n matrix over {+1, -1}; operations apply the 1/√m scaling."""

    entries: np.ndarray
    seed: int | None = None

    def __post_init__(self) -> None:
        a = np.asarray(self.entries)
        if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
            raise DomainError("signature matrix must be 2-D with m, n >= 1")
        if not np.all(np.abs(a) == 1):
            raise DomainError("signature entries must be exactly +1 or -1")
        a = a.astype(np.int8, copy=True)
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def m(self) -> int:
        return int(self.entries.shape[0])

    @property
    def n(self) -> int:
        return int(self.entries.shape[1])

    @property
    def beta(self) -> float:
        return self.n / self.m

    def scaled(self) -> np.ndarray:
        """(1/√m)·A as float64."""
        return self.entries.astype(float) / np.sqrt(self.m)

    def gram(self) -> np.ndarray:
        """(1/m)·A·Aᵀ."""
        a = self.entries.astype(float)
        return (a @ a.T) / self.m


def sample_signature(m: int, n: int, seed: int) -> SignatureMatrix:
    """i.i.d. uniform ±1 entries; the Philox stream makes (seed, index) → entry a pure function."""
    if m < 1 or n < 1:
        raise DomainError("m and n must be >= 1")
    rng = stream(seed, SIGNATURE_STREAM)
    bits = rng.integers(0, 2, size=(m, n), dtype=np.int8)
    return SignatureMatrix(entries=(2 * bits - 1).astype(np.int8), seed=seed)


def sylvester_signature(m: int, n: int | None = None) -> SignatureMatrix:
    """First n columns of the m×m Sylvester–Hadamard matrix (orthogonal rows when n = m)."""
    if m < 1 or (m & (m - 1)) != 0:
        raise DomainError("Sylvester construction needs m a power of two")
    n = m if n is None else n
    if not (1 <= n <= m):
        raise DomainError("need 1 <= n <= m")
    return SignatureMatrix(entries=hadamard(m, dtype=np.int8)[:, :n])


def gram_eigenvalues(A: SignatureMatrix) -> np.ndarray:
    """Ascending eigenvalues of (1/m)AAᵀ, with a residual check on every pair."""
    g = A.gram()
    try:
        vals, vecs = np.linalg.eigh(g)
    except np.linalg.LinAlgError as e:
        raise NumericError(f"symmetric eigensolver failed: {e}") from e
    scale = max(float(np.abs(vals).max()), 1.0)
    residual = np.linalg.norm(g @ vecs - vecs * vals[None, :], axis=0)
    worst = float(residual.max())
    if worst > EIG_RESIDUAL_TOL * scale:
        raise NumericError(f"eigenpair residual {worst:.3e} exceeds {EIG_RESIDUAL_TOL:g}·‖M‖")
    if float(vals.min()) < -1e-10 * scale:
        raise NumericError(f"Gram matrix has a negative eigenvalue {float(vals.min()):.3e}")
    logger.debug("eigh m=%d n=%d worst residual %.3e", A.m, A.n, worst)
    return np.maximum(np.sort(vals), 0.0)
