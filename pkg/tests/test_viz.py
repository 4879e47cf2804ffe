from __future__ import annotations

import json

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from nearfar_cdma.spectral.report import spectrum_report  # noqa: E402
from nearfar_cdma.spectral.signature import sample_signature  # noqa: E402
from nearfar_cdma.sweep.runner import SweepSpec, run_sweep, write_sweep_csv  # noqa: E402
from nearfar_cdma.viz.plot import plot_figure, plot_spectrum, plot_sweep_csv  # noqa: E402


def _small_csv(tmp_path):
    spec = SweepSpec("ebn0_db", 0.0, 10.0, 3, fixed={"beta": 2.0, "pcf_db": 20.0}, outputs=("upper_conjectured",))
    return spec, write_sweep_csv(run_sweep(spec), tmp_path / "small.csv")


def test_plot_sweep_csv_skips_empty_columns(tmp_path):
    _, path = _small_csv(tmp_path)
    ax = plot_sweep_csv(path, title="small")
    labels = [line.get_label() for line in ax.get_lines()]
    assert labels == ["upper_conj"]
    assert np.allclose(ax.get_lines()[0].get_xdata(), [0.0, 5.0, 10.0])
    assert ax.get_title() == "small"
    plt.close(ax.figure)


def test_plot_figure_from_manifest(tmp_path):
    spec, path = _small_csv(tmp_path)
    manifest = {"figure": 2, "curves": [{"name": "small", "title": "t", "file": path.name, "spec": spec.to_dict()}]}
    manifest_path = tmp_path / "manifest.json"
    manifest_path.write_text(json.dumps(manifest))
    out = tmp_path / "fig.png"
    fig = plot_figure(manifest_path, out)
    assert out.stat().st_size > 0
    assert fig.axes[0].get_title() == "Figure 2"
    plt.close(fig)


def test_plot_spectrum(tmp_path):
    report = spectrum_report(sample_signature(32, 64, 0))
    ax = plot_spectrum(report, bins=20)
    assert "KS distance" in ax.get_title()
    assert len(ax.patches) == 20
    plt.close(ax.figure)
