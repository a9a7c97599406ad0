"""Request payloads of the command line and the experiment config schema."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Literal

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)

from utils.errors import ConfigError

ModelKind = Literal["tree", "lattice", "lamplighter"]
RunMode = Literal["bridge", "unconditioned"]
Sampling = Literal["rejection", "importance"]


def _parse_jumps(value: Any) -> Any:
    if isinstance(value, str):
        try:
            return tuple(int(part) for part in value.split(",") if part.strip())
        except ValueError as exc:
            raise ValueError(f"jumps must be comma-separated integers, got {value!r}") from exc
    return value


class ModelArgs(BaseModel):
    model: ModelKind
    b: int | None = None
    dim: int = Field(default=1, ge=1)
    jumps: tuple[int, ...] | None = None

    @field_validator("jumps", mode="before")
    @classmethod
    def split_jumps(cls, value: Any) -> Any:
        return _parse_jumps(value)

    def to_spec(self) -> dict[str, Any]:
        spec = {"kind": self.model, "b": self.b, "dim": self.dim, "jumps": self.jumps}
        return {k: v for k, v in spec.items() if v is not None}


class KernelsPayload(ModelArgs):
    nmax: int = Field(ge=0)
    out: Path
    summary: Path | None = None
    method: Literal["exact", "monte_carlo"] = "exact"
    trials: int | None = Field(default=None, ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)


class BridgePayload(ModelArgs):
    n: int = Field(ge=1)
    trials: int = Field(ge=1)
    seed: int = Field(ge=0, lt=2**64)
    out: Path
    dump_paths: Path | None = None
    mode: RunMode = "bridge"
    sampling: Sampling = "rejection"
    workers: int | None = Field(default=None, ge=1)


class ExperimentPayload(BaseModel):
    config: Path
    workers: int | None = Field(default=None, ge=1)


class LamplighterPayload(BaseModel):
    dim: int = Field(default=1, ge=1)
    nmax: int = Field(ge=0)
    out: Path


class VolumePayload(ModelArgs):
    nmax: int = Field(ge=0)
    out: Path


# =============================================================================
# EXPERIMENT CONFIG
# =============================================================================


class ModelParams(BaseModel):
    model_config = ConfigDict(extra="forbid")

    b: int | None = None
    dim: int = Field(default=1, ge=1)
    jumps: tuple[int, ...] | None = None
    weights: tuple[float, ...] | None = None
    steps: tuple[tuple[tuple[int, ...], float], ...] | None = None


class ExperimentConfig(BaseModel):
    """A deterministic range experiment over a grid of n."""

    model_config = ConfigDict(extra="forbid")

    kind: ModelKind
    params: ModelParams = Field(default_factory=ModelParams)
    n_grid: list[int] = Field(min_length=1)
    trials: int = Field(ge=1)
    mode: RunMode = "bridge"
    sampling: Sampling = "rejection"
    seed: int = Field(ge=0, lt=2**64)
    out: Path
    workers: int = Field(default=1, ge=1)
    dump_paths: Path | None = None
    budgets: dict[str, int] = Field(default_factory=dict)

    @field_validator("n_grid")
    @classmethod
    def positive_grid(cls, value: list[int]) -> list[int]:
        if any(n < 1 for n in value):
            raise ValueError("every n in n_grid must be >= 1")
        return sorted(set(value))

    @model_validator(mode="after")
    def importance_needs_lamplighter_bridges(self) -> "ExperimentConfig":
        if self.sampling == "importance" and (self.kind != "lamplighter" or self.mode != "bridge"):
            raise ValueError("sampling 'importance' applies to lamplighter bridges only")
        return self

    def to_spec(self) -> dict[str, Any]:
        return {"kind": self.kind, **self.params.model_dump(exclude_none=True)}


def _describe(exc: ValidationError) -> tuple[str, str | None]:
    parts = []
    first_field = None
    for error in exc.errors():
        loc = ".".join(str(p) for p in error["loc"]) or "<root>"
        first_field = first_field or loc
        if error["type"] == "extra_forbidden":
            parts.append(f"unknown key '{loc}'")
        else:
            parts.append(f"{loc}: {error['msg']}")
    return "; ".join(parts), first_field


def parse_config(text: str) -> ExperimentConfig:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON: {exc.msg}", line=exc.lineno) from exc
    if not isinstance(raw, dict):
        raise ConfigError("experiment config must be a JSON object")
    try:
        return ExperimentConfig.model_validate(raw)
    except ValidationError as exc:
        message, field = _describe(exc)
        raise ConfigError(message, field=field) from exc


def load_config(path: Path | str) -> ExperimentConfig:
    """Read and fully validate an experiment config; unknown keys are rejected."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_config(text)
