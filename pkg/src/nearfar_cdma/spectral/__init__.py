"""Random ±1 signature matrices and Marčenko–Pastur checks of their Gram spectra."""

from .marchenko_pastur import gram_mp_cdf, mp_cdf, mp_density, mp_edges, mp_point_mass
from .report import PooledSpectralReport, SpectralReport, ks_distance, pool_reports, pooled_spectrum, spectrum_report
from .signature import SignatureMatrix, gram_eigenvalues, sample_signature, sylvester_signature

__all__ = [
    "PooledSpectralReport",
    "SignatureMatrix",
    "SpectralReport",
    "gram_eigenvalues",
    "gram_mp_cdf",
    "ks_distance",
    "mp_cdf",
    "mp_density",
    "mp_edges",
    "mp_point_mass",
    "pool_reports",
    "pooled_spectrum",
    "sample_signature",
    "spectrum_report",
    "sylvester_signature",
]
