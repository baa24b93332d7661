"""
Experiment specs - Declarative sweep configuration.

Spec files are YAML or JSON. A file may hold a single spec or a mapping of
named specs under `experiments:`; `path:name` selects one of them.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any

import structlog
import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from ..algorithms.registry import get_selector, is_wrapper
from ..core.errors import InvalidSpecError
from ..core.rng import MASK64
from ..linalg.field import ExactRational
from ..recovery.recover import RecoveryConfig

logger = structlog.get_logger()


class ExperimentSpec(BaseModel):
    """A sweep over m for a set of algorithms."""

    name: str | None = None
    n: int = Field(gt=1)
    k: int = Field(gt=0)
    m_grid: list[int]
    algorithms: list[str]
    trials: int = Field(ge=1)
    master_seed: int = Field(default=0, ge=0, le=MASK64)
    recovery: RecoveryConfig = Field(default_factory=RecoveryConfig)
    run_recovery: bool = True
    paired: bool = False

    @field_validator("m_grid")
    @classmethod
    def _ascending(cls, grid: list[int]) -> list[int]:
        if not grid:
            raise ValueError("m_grid must not be empty")
        if grid[0] < 1 or any(a >= b for a, b in zip(grid, grid[1:])):
            raise ValueError("m_grid must be positive and strictly ascending")
        return grid

    @field_validator("algorithms")
    @classmethod
    def _known(cls, algorithms: list[str]) -> list[str]:
        if not algorithms:
            raise ValueError("at least one algorithm is required")
        for algorithm in algorithms:
            try:
                get_selector(algorithm)
            except InvalidSpecError as e:
                raise ValueError(str(e)) from e
        return [a.strip() for a in algorithms]

    @model_validator(mode="after")
    def _consistent(self) -> ExperimentSpec:
        if self.k >= self.n:
            raise ValueError(f"need k < n, got k={self.k}, n={self.n}")
        if any(is_wrapper(a) for a in self.algorithms) and self.m_grid[0] < self.k:
            raise ValueError("wrapper algorithms need every m >= k")
        mode = self.recovery.field_mode
        if isinstance(mode, ExactRational) and max(self.m_grid[-1], self.n) > mode.cap:
            raise ValueError(f"exact field mode is capped at dimension {mode.cap}")
        return self


def parse_spec(data: dict[str, Any]) -> ExperimentSpec:
    try:
        return ExperimentSpec.model_validate(data)
    except ValidationError as e:
        raise InvalidSpecError(f"invalid experiment spec: {e}") from e


def load_spec(reference: str | Path) -> ExperimentSpec:
    """
    Load a spec from `path` or `path:name`.

    Raises:
        InvalidSpecError: unreadable file, unknown name or failed validation.
    """
    path, name = _split_reference(str(reference))
    try:
        with open(path) as f:
            data = yaml.safe_load(f)
    except (OSError, yaml.YAMLError) as e:
        raise InvalidSpecError(f"cannot read spec file {path}: {e}") from e
    if not isinstance(data, dict):
        raise InvalidSpecError(f"spec file {path} must hold a mapping")

    if "experiments" in data:
        experiments = data["experiments"] or {}
        if name is None:
            if len(experiments) != 1:
                raise InvalidSpecError(f"{path} holds {len(experiments)} experiments; pick one with {path}:<name>")
            name = next(iter(experiments))
        if name not in experiments:
            raise InvalidSpecError(f"no experiment {name!r} in {path}; known: {sorted(experiments)}")
        data = {"name": name, **experiments[name]}
    elif name is not None:
        raise InvalidSpecError(f"{path} holds a single spec, not named experiments")

    spec = parse_spec(data)
    logger.info("Loaded experiment spec", path=str(path), name=spec.name, algorithms=len(spec.algorithms))
    return spec


def _split_reference(reference: str) -> tuple[Path, str | None]:
    if Path(reference).exists() or ":" not in reference:
        return Path(reference), None
    file_part, _, name = reference.rpartition(":")
    return Path(file_part), name or None
