from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import integrate

from nearfar_cdma.core.entropy import (
    binary_entropy,
    binary_entropy_array,
    bpsk_capacity,
    gaussian_entropy,
    shifted_mixture_entropy,
)
from nearfar_cdma.core.params import (
    SystemParams,
    ebn0_db_to_sigma,
    pcf_db_to_rho,
    rho_to_pcf_db,
    sigma_to_ebn0_db,
)
from nearfar_cdma.core.quadrature import (
    adaptive_simpson,
    composite_normal_rule,
    gauss_hermite_rule,
    std_normal_expectation,
)
from nearfar_cdma.core.rng import ORACLE_STREAM, SIGNATURE_STREAM, stream
from nearfar_cdma.errors import DomainError, NumericError


def _phi(z: float) -> float:
    return math.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)


def _mixture_density(y, v):
    c = 1.0 / math.sqrt(2.0 * math.pi * v)
    return 0.5 * c * (np.exp(-((y - 1.0) ** 2) / (2.0 * v)) + np.exp(-((y + 1.0) ** 2) / (2.0 * v)))


@pytest.mark.parametrize("t, expected", [(0.5, 1.0), (0.0, 0.0), (1.0, 0.0), (0.11, 0.499916)])
def test_binary_entropy_values(t: float, expected: float):
    assert binary_entropy(t) == pytest.approx(expected, abs=1e-6)


@pytest.mark.parametrize("t", [-1e-12, 1.0 + 1e-12, math.nan])
def test_binary_entropy_rejects_outside_unit_interval(t: float):
    with pytest.raises(DomainError):
        binary_entropy(t)


def test_binary_entropy_concave_and_array_matches_scalar():
    rng = np.random.default_rng(3)
    for t1, t2 in rng.uniform(0.0, 1.0, size=(200, 2)):
        assert binary_entropy(0.5 * (t1 + t2)) >= 0.5 * (binary_entropy(t1) + binary_entropy(t2)) - 1e-12
    ts = np.linspace(0.0, 1.0, 101)
    assert np.allclose(binary_entropy_array(ts), [binary_entropy(float(t)) for t in ts], atol=1e-14)


def test_gaussian_entropy_values():
    assert gaussian_entropy(1.0 / (2.0 * math.pi * math.e)) == pytest.approx(0.0, abs=1e-14)
    assert gaussian_entropy(1.0) == pytest.approx(2.0471, abs=1e-4)
    assert gaussian_entropy(4.0) == pytest.approx(gaussian_entropy(1.0) + 1.0, abs=1e-14)
    with pytest.raises(DomainError):
        gaussian_entropy(0.0)


@pytest.mark.parametrize("rule", [gauss_hermite_rule(64), gauss_hermite_rule(8), composite_normal_rule(64)])
def test_quadrature_rule_invariants(rule):
    assert rule.weights.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(rule.weights > 0.0)
    assert np.all(np.diff(rule.nodes) > 0.0)
    assert np.array_equal(rule.nodes, -rule.nodes[::-1])
    assert float(rule.weights @ rule.nodes**2) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("k, moment", [(0, 1.0), (2, 1.0), (4, 3.0), (6, 15.0)])
def test_default_rule_reproduces_even_moments(k: int, moment: float):
    assert std_normal_expectation(lambda z: z**k) == pytest.approx(moment, abs=1e-9)


def test_odd_integrand_vanishes():
    assert abs(std_normal_expectation(lambda z: z)) < 1e-12
    assert abs(std_normal_expectation(lambda z: z, composite_normal_rule(32))) < 1e-12


def test_tanh_expectation_matches_adaptive_integration():
    lam = 0.5

    def f(z: float) -> float:
        return math.tanh(z * math.sqrt(lam) + lam) * _phi(z)

    ref, _ = integrate.quad(f, -10.0, 10.0, epsabs=1e-13, epsrel=1e-13, limit=200)
    value = std_normal_expectation(lambda z: np.tanh(z * math.sqrt(lam) + lam))
    assert value == pytest.approx(ref, abs=1e-9)
    assert adaptive_simpson(f, -10.0, 10.0, tol=1e-12) == pytest.approx(ref, abs=1e-10)


def test_composite_rule_resolves_large_lambda():
    lam = 20.0

    def f(z: float) -> float:
        return math.tanh(z * math.sqrt(lam) + lam) * _phi(z)

    ref, _ = integrate.quad(f, -10.0, 10.0, points=[-math.sqrt(lam)], epsabs=1e-14, limit=400)
    value = std_normal_expectation(lambda z: np.tanh(z * math.sqrt(lam) + lam), composite_normal_rule(64))
    assert value == pytest.approx(ref, abs=1e-11)


def test_non_finite_integrand_raises():
    with pytest.raises(NumericError):
        std_normal_expectation(lambda z: np.where(z > 0, np.inf, 0.0))


def test_shifted_mixture_entropy_bounds_and_limits():
    for v in np.logspace(-3, 3, 25):
        h = shifted_mixture_entropy(float(v))
        g = gaussian_entropy(float(v))
        assert g - 1e-12 <= h <= g + 1.0 + 1e-12
        # The mixture has variance v + 1, and the Gaussian maximises entropy at fixed variance.
        assert h <= gaussian_entropy(float(v) + 1.0) + 1e-9
    assert shifted_mixture_entropy(1e-4) == pytest.approx(gaussian_entropy(1e-4) + 1.0, abs=1e-9)
    assert shifted_mixture_entropy(1e4) - gaussian_entropy(1e4) < 1e-3


def test_shifted_mixture_entropy_matches_monte_carlo():
    v = 1.0
    rng = np.random.default_rng(11)
    n = 1_000_000
    y = rng.choice([-1.0, 1.0], size=n) + math.sqrt(v) * rng.standard_normal(n)
    draws = -np.log2(_mixture_density(y, v))
    se = draws.std(ddof=1) / math.sqrt(n)
    assert abs(shifted_mixture_entropy(v) - draws.mean()) < 3.0 * se


def test_bpsk_capacity_limits_and_reference():
    assert bpsk_capacity(1e-6) == pytest.approx(1.0, abs=1e-6)
    assert bpsk_capacity(1e6) == pytest.approx(0.0, abs=1e-3)

    v = 1.0
    half = 1.0 + 10.0 * math.sqrt(v)

    def neg_plogp(y: float) -> float:
        p = float(_mixture_density(y, v))
        return -p * math.log2(p) if p > 0.0 else 0.0

    h, _ = integrate.quad(neg_plogp, -half, half, points=[-1.0, 0.0, 1.0], epsabs=1e-13, limit=400)
    c = bpsk_capacity(v)
    assert 0.0 < c < 1.0
    assert c == pytest.approx(h - gaussian_entropy(v), abs=1e-6)


def test_bpsk_capacity_decreasing_in_variance():
    values = [bpsk_capacity(float(v)) for v in np.logspace(-3, 3, 50)]
    for a, b in zip(values, values[1:]):
        assert b <= a
        if a < 1.0 - 1e-8:
            assert b < a


def test_bpsk_capacity_rejects_non_positive_variance():
    with pytest.raises(DomainError):
        bpsk_capacity(0.0)
    with pytest.raises(DomainError):
        shifted_mixture_entropy(-1.0)


def test_unit_conversions():
    assert pcf_db_to_rho(20.0) == pytest.approx(0.1, rel=1e-15)
    assert rho_to_pcf_db(0.0) == math.inf
    assert rho_to_pcf_db(pcf_db_to_rho(35.0)) == pytest.approx(35.0, abs=1e-12)
    # Eb/N0 = 1/(2σ²): 0 dB means σ² = 1/2.
    assert ebn0_db_to_sigma(0.0) == pytest.approx(math.sqrt(0.5), rel=1e-15)
    assert sigma_to_ebn0_db(ebn0_db_to_sigma(8.0)) == pytest.approx(8.0, abs=1e-12)


def test_system_params_validation_and_from_db():
    p = SystemParams.from_db(2.0, ebn0_db=20.0, pcf_db=20.0)
    assert p.rho == pytest.approx(0.1)
    assert p.noise_variance == pytest.approx(0.005)
    assert SystemParams.from_db(2.0, ebn0_db=10.0).rho == 0.0
    for bad in ({"beta": 0.0, "sigma": 1.0, "rho": 0.0}, {"beta": 1.0, "sigma": 0.0, "rho": 0.0},
                {"beta": 1.0, "sigma": 1.0, "rho": -0.1}):
        with pytest.raises(DomainError):
            SystemParams(**bad)


def test_streams_are_keyed_by_seed_and_index():
    a = stream(5, SIGNATURE_STREAM).standard_normal(4)
    b = stream(5, SIGNATURE_STREAM).standard_normal(4)
    c = stream(5, ORACLE_STREAM, 0).standard_normal(4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    with pytest.raises(DomainError):
        stream(-1)
    with pytest.raises(DomainError):
        stream(2**64)
    assert np.array_equal(stream(2**64 - 1).integers(0, 10, 3), stream(2**64 - 1).integers(0, 10, 3))
