from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# Allow running as a standalone script from repo root.
ROOT = Path(__file__).resolve().parents[1]
SRC = ROOT / "src"
sys.path.insert(0, str(SRC))

from nearfar_cdma.bounds.capacity import lower_bound  # noqa: E402
from nearfar_cdma.core.params import SystemParams, ebn0_db_to_sigma, pcf_db_to_rho  # noqa: E402
from nearfar_cdma.sweep.figures import FIGURES, write_figure  # noqa: E402
from nearfar_cdma.sweep.runner import read_sweep_csv  # noqa: E402
from nearfar_cdma.viz.plot import plot_figure  # noqa: E402


def _non_decreasing(y: np.ndarray, tol: float = 1e-9) -> bool:
    y = y[~np.isnan(y)]
    return bool(np.all(np.diff(y) >= -tol))


def check_figure(manifest_path: Path) -> dict:
    """Ordering and monotonicity checks on every curve of one figure."""
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    checks = []
    for curve in manifest["curves"]:
        data = read_sweep_csv(manifest_path.parent / curve["file"])
        lower, conj, tanaka = data["lower"], data["upper_conj"], data["upper_tanaka"]
        entry = {"name": curve["name"], "failures": curve["failures"]}
        for col in ("lower", "upper_conj", "upper_tanaka"):
            if not np.all(np.isnan(data[col])):
                entry[f"{col}_non_decreasing"] = _non_decreasing(data[col])
        if not np.all(np.isnan(lower)):
            if not np.all(np.isnan(conj)):
                entry["lower_le_upper_conj"] = bool(np.all(lower <= conj + 1e-6))
            if not np.all(np.isnan(tanaka)):
                entry["lower_le_upper_tanaka"] = bool(np.all(lower <= tanaka + 1e-6))
        checks.append(entry)
    return {"figure": manifest["figure"], "curves": checks}


def pcf_claims(ebn0_db: float = 20.0, beta: float = 2.0) -> dict:
    """Lower bound at PCF 35 dB and 10 dB relative to perfect power control."""
    sigma = ebn0_db_to_sigma(ebn0_db)
    perfect = lower_bound(SystemParams(beta, sigma, 0.0))
    at35 = lower_bound(SystemParams(beta, sigma, pcf_db_to_rho(35.0)))
    at10 = lower_bound(SystemParams(beta, sigma, pcf_db_to_rho(10.0)))
    return {
        "perfect": perfect,
        "pcf35": at35,
        "pcf10": at10,
        "pcf35_rel_gap": (perfect - at35) / perfect,
        "pcf10_rel_gap": (perfect - at10) / perfect,
    }


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--figs", type=int, nargs="+", default=list(FIGURES), choices=FIGURES)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--outdir", type=Path, default=Path("artifacts/figures"))
    args = ap.parse_args()

    args.outdir.mkdir(parents=True, exist_ok=True)
    summary = {"figures": [], "pcf_claims": pcf_claims()}
    for fig in args.figs:
        manifest, _ = write_figure(fig, args.outdir / f"fig{fig}", jobs=args.jobs)
        figure = plot_figure(manifest, args.outdir / f"fig{fig}.png")
        plt.close(figure)
        summary["figures"].append(check_figure(manifest))

    (args.outdir / "figures_summary.json").write_text(json.dumps(summary, indent=2), encoding="utf-8")
    print(json.dumps(summary["pcf_claims"], indent=2))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
