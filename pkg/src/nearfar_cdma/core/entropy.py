"""Scalar information-theoretic functions, all in bits."""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate
from scipy.special import entr

from nearfar_cdma.errors import DomainError, NumericError

LOG2E = 1.0 / math.log(2.0)
_TWO_PI_E = 2.0 * math.pi * math.e

# Absolute tolerance of the mixture-entropy integral.
MIXTURE_ATOL = 1e-9


def binary_entropy(t: float) -> float:
    """H(t) = -t log2 t - (1-t) log2(1-t), with 0 log 0 = 0."""
    if not (0.0 <= t <= 1.0):
        raise DomainError(f"binary_entropy needs t in [0, 1], got {t!r}")
    if t == 0.0 or t == 1.0:
        return 0.0
    return -t * math.log2(t) - (1.0 - t) * math.log2(1.0 - t)


def binary_entropy_array(t: np.ndarray) -> np.ndarray:
    """Vectorised binary entropy; `entr` already returns 0 at the endpoints."""
    t = np.asarray(t, dtype=float)
    return (entr(t) + entr(1.0 - t)) * LOG2E


def gaussian_entropy(variance: float) -> float:
    """Differential entropy ½ log2(2πe·variance)."""
    if not (variance > 0.0):
        raise DomainError(f"variance must be > 0, got {variance!r}")
    return 0.5 * math.log2(_TWO_PI_E * variance)


def _sign_ambiguity_bits(variance: float) -> float:
    """E[log2(1 + exp(-2Y/v))] for Y ~ N(1, v).

    This is the information lost about the sign of a ±1 symbol seen through
    N(0, v) noise; it runs from 0 (v → 0) to 1 (v → ∞).
    """
    s = math.sqrt(variance)
    half = 1.0 + 10.0 * s

    def integrand(y: float) -> float:
        w = (y - 1.0) / s
        density = math.exp(-0.5 * w * w) / (s * math.sqrt(2.0 * math.pi))
        return density * float(np.logaddexp(0.0, -2.0 * y / variance)) * LOG2E

    # Y is concentrated within 10 s of 1; split there and at the origin where
    # the log term turns from ~0 to linear growth.
    lo, hi = 1.0 - half, 1.0 + half
    points = sorted({p for p in (0.0, 1.0 - 5.0 * s, 1.0, 1.0 + 5.0 * s) if lo < p < hi})
    value, abserr = integrate.quad(
        integrand, lo, hi, points=points, epsabs=MIXTURE_ATOL * 0.1, epsrel=0.0, limit=500
    )
    if not math.isfinite(value):
        raise NumericError("sign-ambiguity integral is not finite")
    return min(max(value, 0.0), 1.0)


def shifted_mixture_entropy(variance: float) -> float:
    """Entropy of x ↦ (w(x-1) + w(x+1))/2, w the N(0, variance) density.

    Uses h(ŵ) = h(w) + 1 - E[log2(1 + e^{-2Y/v})], Y ~ N(1, v), which follows
    from ŵ(y) = ½ w(y-1)(1 + e^{-2y/v}) and the symmetry of ŵ.
    """
    if not (variance > 0.0):
        raise DomainError(f"variance must be > 0, got {variance!r}")
    return gaussian_entropy(variance) + 1.0 - _sign_ambiguity_bits(variance)


def bpsk_capacity(variance: float) -> float:
    """Mutual information of a uniform ±1 input over N(0, variance) noise."""
    if not (variance > 0.0):
        raise DomainError(f"variance must be > 0, got {variance!r}")
    # h(ŵ) - h(w), with the Gaussian terms cancelled analytically.
    return 1.0 - _sign_ambiguity_bits(variance)
