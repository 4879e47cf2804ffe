from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from nearfar_cdma.errors import DomainError

SEED_ENV_VAR = "NEARFAR_DEFAULT_SEED"

SELECTION_RULES = ("min_capacity", "max_magnetization", "min_magnetization")


def _from_mapping(cls, data: dict[str, Any]):
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - names)
    if unknown:
        raise DomainError(f"unknown {cls.__name__} keys: {', '.join(unknown)}")
    return cls(**data)


@dataclass(frozen=True, slots=True)
class OptimizerConfig:
    """Grid sizes, tolerances and iteration caps of the inf-sup solver.

    gamma is scanned on a log-spaced grid over [gamma_min, gamma_max], t on a
    uniform grid over [0, 1]; both are then refined by golden-section search
    to `tol` within `max_iter` iterations.
    """

    gamma_min: float = 1e-6
    gamma_max: float = 1e6
    gamma_grid: int = 200
    t_grid: int = 1025
    tol: float = 1e-8
    max_iter: int = 200

    def __post_init__(self) -> None:
        if not (0.0 < self.gamma_min < self.gamma_max):
            raise DomainError("need 0 < gamma_min < gamma_max")
        if self.gamma_grid < 3 or self.t_grid < 3:
            raise DomainError("gamma_grid and t_grid must be >= 3")
        if self.tol <= 0.0:
            raise DomainError("tol must be > 0")
        if self.max_iter < 1:
            raise DomainError("max_iter must be >= 1")

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> OptimizerConfig:
        return _from_mapping(cls, data)


@dataclass(frozen=True, slots=True)
class TanakaConfig:
    grid: int = 4096
    eps: float = 1e-9
    root_tol: float = 1e-12
    residual_tol: float = 1e-10
    dedup_tol: float = 1e-8
    max_bisect: int = 200
    panels: int = 64
    selection: str = "min_capacity"

    def __post_init__(self) -> None:
        if self.grid < 64:
            raise DomainError("grid must be >= 64")
        if not (0.0 < self.eps < 1.0):
            raise DomainError("eps must lie in (0, 1)")
        if self.panels < 1:
            raise DomainError("panels must be >= 1")
        if self.selection not in SELECTION_RULES:
            raise DomainError(f"selection must be one of {SELECTION_RULES}")

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> TanakaConfig:
        return _from_mapping(cls, data)


@dataclass(frozen=True, slots=True)
class OracleConfig:
    samples: int = 100_000
    batch_size: int = 1_000
    max_users: int = 20

    def __post_init__(self) -> None:
        if self.samples < 1 or self.batch_size < 1:
            raise DomainError("samples and batch_size must be >= 1")
        if not (1 <= self.max_users <= 20):
            raise DomainError("max_users must lie in [1, 20]")

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> OracleConfig:
        return _from_mapping(cls, data)


@dataclass(frozen=True, slots=True)
class RunConfig:
    optimizer: OptimizerConfig = OptimizerConfig()
    tanaka: TanakaConfig = TanakaConfig()
    oracle: OracleConfig = OracleConfig()

    def to_dict(self) -> dict[str, Any]:
        return {
            "optimizer": self.optimizer.to_dict(),
            "tanaka": self.tanaka.to_dict(),
            "oracle": self.oracle.to_dict(),
        }


def load_config(path: str | Path | None) -> RunConfig:
    """Read a JSON config file; missing sections fall back to defaults."""
    if path is None:
        return RunConfig()
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise DomainError(f"config {path} is not valid JSON: {e}") from e
    if not isinstance(raw, dict):
        raise DomainError("config root must be a JSON object")
    unknown = sorted(set(raw) - {"optimizer", "tanaka", "oracle"})
    if unknown:
        raise DomainError(f"unknown config sections: {', '.join(unknown)}")
    return RunConfig(
        optimizer=OptimizerConfig.from_dict(raw.get("optimizer", {})),
        tanaka=TanakaConfig.from_dict(raw.get("tanaka", {})),
        oracle=OracleConfig.from_dict(raw.get("oracle", {})),
    )


def default_seed() -> int:
    value = os.environ.get(SEED_ENV_VAR)
    if value is None or value.strip() == "":
        return 0
    try:
        return int(value)
    except ValueError as e:
        raise DomainError(f"{SEED_ENV_VAR} must be an integer, got {value!r}") from e
