from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import integrate

from nearfar_cdma.errors import DomainError
from nearfar_cdma.spectral.marchenko_pastur import gram_mp_cdf, mp_cdf, mp_density, mp_edges, mp_point_mass
from nearfar_cdma.spectral.report import ks_distance, pool_reports, pooled_spectrum, spectrum_report
from nearfar_cdma.spectral.signature import (
    SignatureMatrix,
    gram_eigenvalues,
    sample_signature,
    sylvester_signature,
)


@pytest.mark.parametrize(
    "beta, a, b",
    [(4.0, 1.0, 9.0), (1.0, 0.0, 4.0), (2.0, 0.171572875, 5.828427125)],
)
def test_mp_edges(beta: float, a: float, b: float):
    lo, hi = mp_edges(beta)
    assert lo == pytest.approx(a, abs=1e-9)
    assert hi == pytest.approx(b, abs=1e-9)


def test_mp_edges_rejects_non_positive_beta():
    with pytest.raises(DomainError):
        mp_edges(0.0)
    with pytest.raises(DomainError):
        mp_density(1.0, -2.0)


@pytest.mark.parametrize("beta", [0.5, 1.0, 2.0, 4.0])
def test_mp_density_normalises_with_point_mass(beta: float):
    a, b = mp_edges(beta)
    mass, _ = integrate.quad(lambda x: mp_density(x, beta), a, b, epsabs=1e-12, epsrel=1e-12, limit=500)
    assert mass + mp_point_mass(beta) == pytest.approx(1.0, abs=1e-8)
    assert mp_density(b + 1.0, beta) == 0.0
    if a > 0.0:
        assert mp_density(a, beta) == 0.0


@pytest.mark.parametrize("beta", [0.5, 1.0, 2.0, 4.0])
def test_mp_cdf_matches_quadrature(beta: float):
    a, b = mp_edges(beta)
    for x in np.linspace(a, b, 9)[1:-1]:
        part, _ = integrate.quad(lambda t: mp_density(t, beta), a, x, epsabs=1e-12, limit=500)
        assert mp_cdf(float(x), beta) == pytest.approx(mp_point_mass(beta) + part, abs=1e-6)
    assert mp_cdf(-1.0, beta) == 0.0
    assert mp_cdf(b + 1.0, beta) == pytest.approx(1.0, abs=1e-8)


def test_gram_cdf_point_mass_for_underloaded_systems():
    # For beta < 1 the m×m Gram matrix has rank n, so a fraction 1 - beta of its spectrum sits at 0.
    assert gram_mp_cdf(0.0, 0.5) == pytest.approx(0.5, abs=1e-12)
    assert gram_mp_cdf(0.0, 2.0) == 0.0
    assert gram_mp_cdf(10.0, 2.0) == pytest.approx(1.0, abs=1e-8)


def test_sample_signature_determinism_and_balance():
    a = sample_signature(2, 2, seed=17)
    b = sample_signature(2, 2, seed=17)
    assert np.array_equal(a.entries, b.entries)
    big = sample_signature(64, 128, seed=17)
    assert abs(float(big.entries.mean())) <= 0.1
    one = sample_signature(1, 1, seed=123)
    assert int(one.entries[0, 0]) in (-1, 1)


def test_signature_matrix_rejects_bad_entries():
    with pytest.raises(DomainError):
        SignatureMatrix(np.array([[1, 0], [1, -1]]))
    with pytest.raises(DomainError):
        SignatureMatrix(np.ones(3))
    with pytest.raises(DomainError):
        sylvester_signature(6)


def test_gram_eigenvalues_small_cases():
    assert np.allclose(gram_eigenvalues(SignatureMatrix(np.array([[1, 1], [1, -1]]))), [1.0, 1.0], atol=1e-12)
    assert np.allclose(gram_eigenvalues(SignatureMatrix(np.array([[1, 1]]))), [2.0], atol=1e-12)


@pytest.mark.parametrize("m, n, seed", [(3, 7, 0), (16, 32, 1), (40, 20, 2)])
def test_gram_eigenvalues_trace_and_sign(m: int, n: int, seed: int):
    vals = gram_eigenvalues(sample_signature(m, n, seed))
    assert vals.shape == (m,)
    assert np.all(np.diff(vals) >= 0.0)
    assert np.all(vals >= 0.0)
    assert float(vals.sum()) == pytest.approx(n, abs=1e-9)


def test_sylvester_rows_are_orthogonal():
    A = sylvester_signature(8)
    assert np.array_equal(A.gram(), np.eye(8))
    r = spectrum_report(sylvester_signature(2))
    assert r.min_eig == pytest.approx(1.0, abs=1e-12)
    assert r.max_eig == pytest.approx(1.0, abs=1e-12)


def test_ks_distance_against_exact_cdf():
    # Evenly placed quantiles of U(0, 1) sit exactly half a step from the CDF.
    x = (np.arange(10) + 0.5) / 10
    assert ks_distance(x, lambda t: np.clip(t, 0.0, 1.0)) == pytest.approx(0.05, abs=1e-12)
    with pytest.raises(DomainError):
        ks_distance(np.array([]), lambda t: t)


def test_spectrum_report_is_deterministic():
    r1 = spectrum_report(sample_signature(32, 64, seed=9))
    r2 = spectrum_report(sample_signature(32, 64, seed=9))
    assert r1 == r2
    assert (r1.mp_lower_edge, r1.mp_upper_edge) == mp_edges(2.0)
    assert 0.0 <= r1.ks_distance <= 1.0


def test_pool_reports_rejects_mixed_shapes():
    reports = [spectrum_report(sample_signature(4, 8, 0)), spectrum_report(sample_signature(4, 6, 1))]
    with pytest.raises(DomainError):
        pool_reports(reports)


@pytest.mark.slow
def test_marchenko_pastur_at_desk_scale():
    pooled = pooled_spectrum(256, 512, seeds=range(10))
    assert pooled.pooled_ks_distance < 0.05
    assert all(t.ks_distance < 0.05 for t in pooled.trials)
    a, b = mp_edges(2.0)
    for t in pooled.trials:
        assert abs(t.max_eig - b) / b < 0.08
        # The lower soft edge fluctuates by about 5% of a at m = 256 and sits inside the bulk on average.
        assert t.min_eig > (1.0 - 0.08) * a
    assert abs(pooled.max_edge_rel_dev) < 0.08
    assert abs(pooled.min_edge_rel_dev) < 0.08
    assert pooled.max_trace_error < 1e-9
    assert math.isclose(pooled.beta, 2.0)
