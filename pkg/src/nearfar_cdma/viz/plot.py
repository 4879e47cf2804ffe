from __future__ import annotations

import json
from collections.abc import Sequence
from pathlib import Path

import matplotlib.pyplot as plt
import numpy as np

from nearfar_cdma.spectral.marchenko_pastur import mp_density
from nearfar_cdma.spectral.report import SpectralReport
from nearfar_cdma.sweep.runner import read_sweep_csv

AXIS_LABELS = {"ebn0_db": "$E_b/N_0$ (dB)", "pcf_db": "PCF (dB)", "beta": r"$\beta$"}
CURVE_COLUMNS = ("lower", "upper_conj", "upper_tanaka", "exact")


def plot_sweep_csv(
    path: str | Path,
    *,
    ax=None,
    columns: Sequence[str] = CURVE_COLUMNS,
    axis_name: str = "ebn0_db",
    label: str | None = None,
    title: str | None = None,
):
    """One line per non-empty bound column of a sweep CSV."""
    if ax is None:
        _, ax = plt.subplots()
    data = read_sweep_csv(path)
    x = data["axis"]
    for col in columns:
        y = data[col]
        if np.all(np.isnan(y)):
            continue
        ax.plot(x, y, marker=".", label=f"{label} {col}" if label else col)
    ax.set_xlabel(AXIS_LABELS.get(axis_name, axis_name))
    ax.set_ylabel("sum capacity (bits/user)")
    ax.set_ylim(0.0, 1.05)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize="small")
    if title:
        ax.set_title(title)
    return ax


def plot_figure(manifest_path: str | Path, out_path: str | Path | None = None):
    """Overlay every curve listed in a figure manifest; saves to out_path when given."""
    manifest_path = Path(manifest_path)
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    curves = manifest["curves"]
    for curve in curves:
        spec = curve["spec"]
        plot_sweep_csv(
            manifest_path.parent / curve["file"],
            ax=ax,
            columns=[c if c != "upper_conjectured" else "upper_conj" for c in spec["outputs"]],
            axis_name=spec["axis"],
            label=curve["name"] if len(curves) > 1 else None,
        )
    ax.set_title(f"Figure {manifest['figure']}")
    if out_path is not None:
        fig.savefig(out_path, dpi=150, bbox_inches="tight")
    return fig


def plot_spectrum(report: SpectralReport, *, ax=None, bins: int = 60):
    """Eigenvalue histogram of (1/m)AAᵀ against the Marčenko–Pastur density.

    The continuous part of the m×m spectrum has density β·f_β.
    """
    if ax is None:
        _, ax = plt.subplots()
    vals = np.asarray(report.eigenvalues)
    ax.hist(vals, bins=bins, density=True, alpha=0.5, label=f"m={report.m}, n={report.n}")
    x = np.linspace(max(report.mp_lower_edge, 1e-6), report.mp_upper_edge, 400)
    ax.plot(x, report.beta * mp_density(x, report.beta), label="Marčenko–Pastur")
    ax.axvline(report.mp_lower_edge, ls=":", c="k")
    ax.axvline(report.mp_upper_edge, ls=":", c="k")
    ax.set_xlabel("eigenvalue")
    ax.set_title(f"KS distance {report.ks_distance:.4f}")
    ax.legend(fontsize="small")
    return ax
