"""Preset sweeps behind the five published capacity figures."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from nearfar_cdma.config import RunConfig
from nearfar_cdma.errors import DomainError
from nearfar_cdma.sweep.runner import SweepResult, SweepSpec, run_sweep, write_sweep_csv

logger = logging.getLogger(__name__)

# Straddles the "above 35 dB is close to perfect" and "below 20 dB degrades" regimes.
PCF_SET_DB = (15.0, 20.0, 25.0, 35.0)
FIGURES = (1, 2, 3, 4, 5)
OVERLOADED_BOUNDS = ("lower", "upper_conjectured", "upper_tanaka")
MANIFEST_NAME = "manifest.json"


@dataclass(frozen=True, slots=True)
class Curve:
    name: str
    title: str
    spec: SweepSpec


def _ebn0_sweep(beta: float, pcf_db: float, outputs: tuple[str, ...]) -> SweepSpec:
    return SweepSpec(
        axis="ebn0_db", start=0.0, stop=20.0, points=21,
        fixed={"beta": beta, "pcf_db": pcf_db}, outputs=outputs,
    )


def figure_curves(fig: int) -> list[Curve]:
    if fig == 1:
        return [
            Curve(f"fig1_pcf{int(p)}", f"lower bound, beta=2, PCF={p:g} dB", _ebn0_sweep(2.0, p, ("lower",)))
            for p in PCF_SET_DB
        ]
    if fig == 2:
        return [
            Curve(
                f"fig2_pcf{int(p)}",
                f"conjectured upper bound, beta=4, PCF={p:g} dB",
                _ebn0_sweep(4.0, p, ("upper_conjectured",)),
            )
            for p in PCF_SET_DB
        ]
    if fig in (3, 4):
        beta = 2.0 if fig == 3 else 4.0
        return [
            Curve(f"fig{fig}_bounds", f"bounds, beta={beta:g}, PCF=20 dB", _ebn0_sweep(beta, 20.0, OVERLOADED_BOUNDS))
        ]
    if fig == 5:
        spec = SweepSpec(
            axis="pcf_db", start=5.0, stop=45.0, points=41,
            fixed={"beta": 2.0, "ebn0_db": 20.0}, outputs=OVERLOADED_BOUNDS,
        )
        return [Curve("fig5_bounds", "bounds vs PCF, beta=2, Eb/N0=20 dB", spec)]
    raise DomainError(f"figure must be one of {FIGURES}, got {fig!r}")


def write_figure(
    fig: int, out_dir: str | Path, jobs: int = 1, config: RunConfig | None = None
) -> tuple[Path, list[SweepResult]]:
    """Write one CSV per curve plus manifest.json; returns (manifest path, results)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries: list[dict[str, Any]] = []
    results = []
    for curve in figure_curves(fig):
        result = run_sweep(curve.spec, jobs=jobs, config=config)
        path = write_sweep_csv(result, out_dir / f"{curve.name}.csv")
        logger.info("wrote %s", path)
        entries.append(
            {
                "name": curve.name,
                "title": curve.title,
                "file": path.name,
                "spec": curve.spec.to_dict(),
                "failures": result.failures,
            }
        )
        results.append(result)
    manifest = {"figure": fig, "curves": entries}
    manifest_path = out_dir / MANIFEST_NAME
    manifest_path.write_bytes((json.dumps(manifest, indent=2) + "\n").encode("utf-8"))
    return manifest_path, results
