"""Parameter sweeps over one SystemParams axis, written as deterministic CSV."""

from __future__ import annotations

import csv
import io
import logging
import multiprocessing
from collections.abc import Mapping
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from nearfar_cdma.bounds.capacity import BOUND_FIELDS, BoundSet, capacity_bounds
from nearfar_cdma.config import RunConfig
from nearfar_cdma.core.params import SystemParams, ebn0_db_to_sigma, pcf_db_to_rho
from nearfar_cdma.errors import DomainError, NearFarError

logger = logging.getLogger(__name__)

AXES = ("ebn0_db", "pcf_db", "beta")
FIXED_KEYS = ("beta", "sigma", "ebn0_db", "rho", "pcf_db")
CSV_HEADER = ("axis", "lower_raw", "lower", "upper_conj", "upper_tanaka", "exact", "theta2", "omega2")


@dataclass(frozen=True, slots=True)
class SweepSpec:
    """One axis swept on `points` evenly spaced values from `start` to `stop`.

    `fixed` supplies the other SystemParams fields: beta, one of sigma/ebn0_db,
    and at most one of rho/pcf_db (rho = 0 when both are absent).
    """

    axis: str
    start: float
    stop: float
    points: int
    fixed: Mapping[str, float] = field(default_factory=dict)
    outputs: tuple[str, ...] = BOUND_FIELDS

    def __post_init__(self) -> None:
        if self.axis not in AXES:
            raise DomainError(f"axis must be one of {AXES}, got {self.axis!r}")
        if not (self.start < self.stop):
            raise DomainError("sweep needs start < stop")
        if self.points < 2:
            raise DomainError("sweep needs points >= 2")
        unknown = sorted(set(self.fixed) - set(FIXED_KEYS))
        if unknown:
            raise DomainError(f"unknown fixed parameters: {', '.join(unknown)}")
        if self.axis in self.fixed:
            raise DomainError(f"{self.axis} is the sweep axis and cannot also be fixed")
        bad = sorted(set(self.outputs) - set(BOUND_FIELDS))
        if bad or not self.outputs:
            raise DomainError(f"outputs must be a non-empty subset of {BOUND_FIELDS}")
        object.__setattr__(self, "fixed", dict(self.fixed))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        keys = set(self.fixed) | {self.axis}
        if len(keys & {"sigma", "ebn0_db"}) != 1:
            raise DomainError("exactly one of sigma / ebn0_db must be given")
        if len(keys & {"rho", "pcf_db"}) > 1:
            raise DomainError("at most one of rho / pcf_db may be given")
        if "beta" not in keys:
            raise DomainError("beta must be fixed or swept")
        # Every grid point must convert to valid SystemParams.
        for value in (self.start, self.stop):
            self.params_at(value)

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)

    def params_at(self, value: float) -> SystemParams:
        p = dict(self.fixed)
        p[self.axis] = float(value)
        sigma = p["sigma"] if "sigma" in p else ebn0_db_to_sigma(p["ebn0_db"])
        if "rho" in p:
            rho = p["rho"]
        elif "pcf_db" in p:
            rho = pcf_db_to_rho(p["pcf_db"])
        else:
            rho = 0.0
        return SystemParams(beta=p["beta"], sigma=sigma, rho=rho)

    def to_dict(self) -> dict[str, Any]:
        return {
            "axis": self.axis,
            "start": self.start,
            "stop": self.stop,
            "points": self.points,
            "fixed": {k: self.fixed[k] for k in FIXED_KEYS if k in self.fixed},
            "outputs": list(self.outputs),
        }


@dataclass(frozen=True, slots=True)
class SweepRow:
    value: float
    bounds: BoundSet | None
    error: str | None = None


@dataclass(frozen=True, slots=True)
class SweepResult:
    spec: SweepSpec
    rows: tuple[SweepRow, ...]

    @property
    def failures(self) -> int:
        return sum(1 for r in self.rows if r.bounds is None)

    @property
    def partial(self) -> bool:
        return self.failures > 0


def _evaluate_point(args: tuple[SweepSpec, float, RunConfig]) -> SweepRow:
    spec, value, config = args
    try:
        bs = capacity_bounds(spec.params_at(value), config.optimizer, config.tanaka, spec.outputs)
    except NearFarError as e:
        return SweepRow(value=value, bounds=None, error=f"{type(e).__name__}: {e}")
    return SweepRow(value=value, bounds=bs)


def run_sweep(spec: SweepSpec, jobs: int = 1, config: RunConfig | None = None) -> SweepResult:
    """Evaluate every grid point; rows keep axis order whatever the job count."""
    if jobs < 1:
        raise DomainError("jobs must be >= 1")
    config = config or RunConfig()
    tasks = [(spec, float(v), config) for v in spec.values()]
    if jobs == 1:
        rows = [_evaluate_point(t) for t in tasks]
    else:
        # spawn: forked workers can inherit a BLAS lock held by a parent thread.
        with ProcessPoolExecutor(max_workers=jobs, mp_context=multiprocessing.get_context("spawn")) as pool:
            rows = list(pool.map(_evaluate_point, tasks))
    for row in rows:
        if row.error is not None:
            logger.warning("%s = %r failed: %s", spec.axis, row.value, row.error)
    logger.info("sweep over %s: %d points, %d failed", spec.axis, len(rows), sum(r.bounds is None for r in rows))
    return SweepResult(spec=spec, rows=tuple(rows))


def format_cell(value: float | None) -> str:
    """Shortest round-trip representation; empty for a missing value."""
    if value is None:
        return ""
    return repr(float(value))


def _csv_cells(row: SweepRow) -> list[str]:
    bs = row.bounds
    if bs is None:
        return [format_cell(row.value)] + [""] * (len(CSV_HEADER) - 1)
    return [
        format_cell(row.value),
        format_cell(bs.lower_raw),
        format_cell(bs.lower),
        format_cell(bs.upper_conjectured),
        format_cell(bs.upper_tanaka),
        format_cell(bs.exact),
        format_cell(bs.theta2),
        format_cell(bs.omega2),
    ]


def sweep_csv_text(result: SweepResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in result.rows:
        writer.writerow(_csv_cells(row))
    return buf.getvalue()


def write_sweep_csv(result: SweepResult, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(sweep_csv_text(result).encode("utf-8"))
    return path


def read_sweep_csv(path: str | Path) -> dict[str, np.ndarray]:
    """Columns of a sweep CSV as float arrays; empty cells become NaN."""
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CSV_HEADER:
            raise DomainError(f"{path} is not a sweep CSV (header {header!r})")
        rows = list(reader)
    return {
        name: np.array([float(r[i]) if r[i] != "" else np.nan for r in rows]) for i, name in enumerate(header)
    }
