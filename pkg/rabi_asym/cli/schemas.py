"""
Run configuration of the command-line subcommands
"""
import json
import math
from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from rabi_asym.core.errors import ConfigError
from rabi_asym.models import ModelParams

Subcommand = Literal["sweep", "pt-compare", "parent-check", "specfun-eval"]


def format_number(value: float) -> str:
    return format(value, ".12g")


class GridSpec(BaseModel):
    """Inclusive grid start:stop:step, or a single value"""

    model_config = ConfigDict(frozen=True)

    start: float
    stop: float
    step: Optional[float] = Field(None, gt=0)

    @model_validator(mode="after")
    def _check_order(self) -> "GridSpec":
        if self.step is None and self.stop != self.start:
            raise ValueError("a grid without step must have start == stop")
        if self.stop < self.start:
            raise ValueError(f"grid stop {self.stop} is below start {self.start}")
        return self

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        parts = text.split(":")
        try:
            numbers = [float(part) for part in parts]
        except ValueError as e:
            raise ConfigError(f"cannot parse grid {text!r}: expected start:stop:step or a number") from e
        if len(numbers) == 1:
            return cls(start=numbers[0], stop=numbers[0])
        if len(numbers) == 3:
            return cls(start=numbers[0], stop=numbers[1], step=numbers[2])
        raise ConfigError(f"grid {text!r} must have one or three fields")

    def values(self) -> np.ndarray:
        if self.step is None:
            return np.array([self.start])
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return np.round(self.start + self.step * np.arange(count), 12)

    def __str__(self) -> str:
        if self.step is None:
            return format_number(self.start)
        return ":".join(format_number(v) for v in (self.start, self.stop, self.step))


class RunConfig(BaseModel):
    """Everything a subcommand needs to reproduce its output"""

    model_config = ConfigDict(frozen=True)

    subcommand: Subcommand
    omega: float = Field(1.0, gt=0)
    g: float = Field(0.0, ge=0)
    epsilon: float = Field(0.0, ge=0)
    delta: float = Field(0.0, ge=0)
    g_grid: Optional[GridSpec] = None
    delta_grid: Optional[GridSpec] = None
    n_levels: Optional[int] = Field(None, ge=1)
    n_max: Optional[int] = Field(None, ge=0)
    jobs: Optional[int] = Field(None, ge=0)
    energy_rotated: bool = False
    f_kind: Literal["special", "geometric", "zero"] = "special"
    s: float = 1.0
    n_limit: int = Field(20, ge=0)
    function: Optional[str] = None
    args: List[float] = Field(default_factory=list)

    @field_validator("s")
    @classmethod
    def _check_s(cls, v: float) -> float:
        if v == 0:
            raise ValueError("s must be nonzero")
        return v

    @property
    def params(self) -> ModelParams:
        return ModelParams(omega=self.omega, g=self.g, epsilon=self.epsilon, delta=self.delta)

    def to_header(self) -> str:
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_header(cls, text: str) -> "RunConfig":
        return cls.model_validate_json(text)
