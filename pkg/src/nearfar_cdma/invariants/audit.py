"""Strict checks of result records; every failure raises AssertionError.

Audits only read their argument. Records are frozen and their arrays read-only,
so a passing audit leaves the record exactly as it was.
"""

from __future__ import annotations

import math

import numpy as np

from nearfar_cdma.bounds.capacity import BoundSet
from nearfar_cdma.core.quadrature import QuadratureRule
from nearfar_cdma.oracle.mutual_info import EffectiveCovariance, MiEstimate
from nearfar_cdma.spectral.marchenko_pastur import mp_edges
from nearfar_cdma.spectral.report import SpectralReport
from nearfar_cdma.tanaka.fixed_point import TanakaBound, TanakaSolution

ORDERING_TOL = 1e-6


def audit_quadrature_rule(rule: QuadratureRule) -> None:
    z, w = rule.nodes, rule.weights
    if z.shape != (rule.order,) or w.shape != (rule.order,):
        raise AssertionError("rule nodes/weights do not match its order")
    if not (np.all(np.isfinite(z)) and np.all(np.isfinite(w))):
        raise AssertionError("non-finite node or weight")
    if np.any(w <= 0.0):
        raise AssertionError("quadrature weights must be positive")
    if abs(float(w.sum()) - 1.0) > 1e-12:
        raise AssertionError(f"weights sum to {float(w.sum())!r}, not 1")
    if np.any(np.diff(z) <= 0.0):
        raise AssertionError("nodes are not strictly increasing")
    if not np.array_equal(z, -z[::-1]):
        raise AssertionError("nodes are not symmetric about 0")


def audit_spectral_report(r: SpectralReport) -> None:
    vals = np.asarray(r.eigenvalues)
    if vals.size != r.m:
        raise AssertionError(f"expected {r.m} eigenvalues, got {vals.size}")
    if np.any(np.diff(vals) < 0.0):
        raise AssertionError("eigenvalues not sorted ascending")
    if np.any(vals < 0.0):
        raise AssertionError("negative eigenvalue in report")
    a, b = mp_edges(r.beta)
    if (r.mp_lower_edge, r.mp_upper_edge) != (a, b):
        raise AssertionError("report edges disagree with mp_edges(beta)")
    if not (0.0 <= r.ks_distance <= 1.0):
        raise AssertionError(f"ks_distance {r.ks_distance!r} outside [0, 1]")
    if r.min_eig != vals[0] or r.max_eig != vals[-1]:
        raise AssertionError("min_eig/max_eig disagree with the eigenvalue list")
    # trace((1/m)AAᵀ) = n for a ±1 matrix.
    if abs(r.trace - r.n) > 1e-9 * max(r.n, 1):
        raise AssertionError(f"trace {r.trace!r} differs from n = {r.n}")


def audit_tanaka_solution(
    sol: TanakaSolution, beta: float, noise_variance: float, residual_tol: float = 1e-10
) -> None:
    if not (0.0 <= sol.m_mag < 1.0):
        raise AssertionError(f"m = {sol.m_mag!r} outside [0, 1)")
    lam = 1.0 / (noise_variance + beta * (1.0 - sol.m_mag))
    if not math.isclose(sol.lam, lam, rel_tol=1e-12):
        raise AssertionError(f"lambda {sol.lam!r} inconsistent with m (expected {lam!r})")
    if not (sol.residual <= residual_tol):
        raise AssertionError(f"residual {sol.residual:.3e} > {residual_tol:g}")
    if not math.isfinite(sol.capacity_bits):
        raise AssertionError("non-finite Tanaka capacity")
    if sol.capacity_bits > 1.0:
        raise AssertionError(f"Tanaka capacity {sol.capacity_bits!r} exceeds one bit")


def audit_tanaka_bound(bound: TanakaBound, residual_tol: float = 1e-10) -> None:
    if not bound.solutions:
        raise AssertionError("Tanaka bound without solutions")
    for sol in bound.solutions:
        audit_tanaka_solution(sol, bound.beta, bound.noise_variance, residual_tol)
    ms = [s.m_mag for s in bound.solutions]
    if ms != sorted(ms):
        raise AssertionError("solutions not ordered by magnetization")
    if not (0 <= bound.selected < len(bound.solutions)):
        raise AssertionError("selected index out of range")
    if bound.tangency != (len(bound.solutions) % 2 == 0):
        raise AssertionError("tangency flag disagrees with the solution count parity")


def audit_bound_set(bs: BoundSet, tol: float = ORDERING_TOL) -> None:
    sigma2 = bs.sigma * bs.sigma
    if not (bs.theta2 >= bs.omega2 >= sigma2 * (1.0 - 1e-15)):
        raise AssertionError("need theta2 >= omega2 >= sigma^2")
    for name in ("lower", "upper_conjectured", "upper_tanaka", "exact"):
        value = getattr(bs, name)
        if value is None:
            continue
        if not (0.0 <= value <= 1.0):
            raise AssertionError(f"{name} = {value!r} outside [0, 1]")
    if bs.exact is not None:
        if bs.beta > 1.0:
            raise AssertionError("exact value reported in the overloaded regime")
        fields = (bs.lower, bs.upper_conjectured, bs.upper_tanaka)
        if any(f != bs.exact for f in fields):
            raise AssertionError("underloaded bounds must all equal the exact value")
        return
    if bs.lower is None:
        return
    for name in ("upper_conjectured", "upper_tanaka"):
        upper = getattr(bs, name)
        if upper is not None and bs.lower > upper + tol:
            raise AssertionError(f"lower {bs.lower!r} exceeds {name} {upper!r}")


def audit_effective_covariance(cov: EffectiveCovariance, sigma: float) -> None:
    m = cov.matrix
    if float(np.max(np.abs(m - m.T))) > 1e-12:
        raise AssertionError("covariance is not symmetric")
    smallest = float(np.linalg.eigvalsh(m)[0])
    if smallest < sigma * sigma - 1e-10:
        raise AssertionError(f"smallest eigenvalue {smallest!r} below sigma^2")
    sign, logdet = np.linalg.slogdet(m)
    if sign <= 0 or abs(logdet - cov.log_det) > 1e-10 * max(1.0, abs(logdet)):
        raise AssertionError("log_det inconsistent with the matrix")
    if not np.allclose(cov.factor @ cov.factor.T, m, rtol=0.0, atol=1e-12 * max(1.0, float(np.abs(m).max()))):
        raise AssertionError("factor does not reproduce the covariance")


def audit_mi_estimate(est: MiEstimate) -> None:
    if not (math.isfinite(est.std_error) and est.std_error >= 0.0):
        raise AssertionError("std_error must be finite and >= 0")
    if est.samples < 1:
        raise AssertionError("samples must be positive")
    tol = 3.0 * est.std_error
    if est.bits_per_user < -tol:
        raise AssertionError(f"negative MI estimate {est.bits_per_user!r} beyond 3 standard errors")
    if est.bits_per_user > 1.0 + tol:
        raise AssertionError(f"MI estimate {est.bits_per_user!r} above 1 bit/user beyond 3 standard errors")
