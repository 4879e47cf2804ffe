"""Ordered, parallel parameter sweeps and the figure presets built on them."""

from .figures import FIGURES, PCF_SET_DB, Curve, figure_curves, write_figure
from .runner import (
    CSV_HEADER,
    SweepResult,
    SweepRow,
    SweepSpec,
    format_cell,
    read_sweep_csv,
    run_sweep,
    sweep_csv_text,
    write_sweep_csv,
)

__all__ = [
    "CSV_HEADER",
    "FIGURES",
    "PCF_SET_DB",
    "Curve",
    "SweepResult",
    "SweepRow",
    "SweepSpec",
    "figure_curves",
    "format_cell",
    "read_sweep_csv",
    "run_sweep",
    "sweep_csv_text",
    "write_figure",
    "write_sweep_csv",
]
