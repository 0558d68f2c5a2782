"""Hyperparameter grids.

A grid is a base TrainConfig plus named axes; every axis name is a
TrainConfig field and the grid is the Cartesian product of the axis values
in declaration order. The two presets reproduce the published grids.
"""
import itertools
from pathlib import Path
from typing import Any, Dict, List

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from config.train_config import LrSchedule, OptimizerKind, PendulumDataConfig, TrainConfig
from interfaces.errors import ConfigError
from interfaces.models import TaskType

PENDULUM_AXES: Dict[str, List[Any]] = {
    "lr": [1e-4, 1e-3, 1e-2, 1e-1],
    "optimizer": [OptimizerKind.ADAM.value, OptimizerKind.SGD.value],
    "kernel_size": [2, 3, 4, 5],
    "hidden_channels": [16, 32],
    "n_hidden_layers": [1, 2, 3, 4],
}

CLASSIFY_AXES: Dict[str, List[Any]] = {
    "lr": [1e-4, 1e-3, 1e-2, 1e-1],
    "optimizer": [OptimizerKind.ADAM.value],
    "kernel_size": [3, 4, 5],
    "hidden_channels": [16, 32],
    "n_hidden_layers": [1, 2, 3, 4],
    "batch_size": [16, 32, 64],
}

PENDULUM_BASE: Dict[str, Any] = {
    "batch_size": 16,
    "epochs": 100,
    "lr_schedule": LrSchedule.CONSTANT,
}

CLASSIFY_BASE: Dict[str, Any] = {
    "epochs": 200,
    "lr_schedule": LrSchedule.LINEAR,
}


class GridSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    base: TrainConfig = Field(default_factory=TrainConfig)
    axes: Dict[str, List[Any]] = Field(default_factory=dict)
    n_seeds: int = Field(4, ge=1)

    @field_validator("axes")
    @classmethod
    def _check_axes(cls, axes: Dict[str, List[Any]]) -> Dict[str, List[Any]]:
        for name, values in axes.items():
            if name not in TrainConfig.model_fields or name in ("data", "seed"):
                raise ValueError(f"'{name}' is not a grid axis")
            if not values:
                raise ValueError(f"axis '{name}' has no values")
        return axes

    @property
    def size(self) -> int:
        size = 1
        for values in self.axes.values():
            size *= len(values)
        return size

    def combinations(self) -> List[Dict[str, Any]]:
        names = list(self.axes)
        return [dict(zip(names, values)) for values in itertools.product(*self.axes.values())]

    def config_for(self, combo: Dict[str, Any], seed: int) -> TrainConfig:
        payload = self.base.model_dump(mode="json", by_alias=True)
        payload.update(combo)
        payload["seed"] = seed
        try:
            return TrainConfig.model_validate(payload)
        except ValidationError as e:
            raise ConfigError(f"grid point {combo} is not a valid config: {e}") from e

    @classmethod
    def from_json_file(cls, path) -> "GridSpec":
        return cls.model_validate_json(Path(path).read_text(encoding="utf-8"))


def pendulum_grid(n_seeds: int = 4, **base: Any) -> GridSpec:
    """4 lrs x 2 optimizers x 4 kernel sizes x 2 widths x 4 depths = 256 points.

    Each run trains 100 epochs in batches of 16 at a constant lr on the
    80/10/10 train/validation/test split.
    """
    fields = dict(PENDULUM_BASE, data=PendulumDataConfig(validation=True))
    fields.update(base)
    return GridSpec(base=TrainConfig(task=TaskType.PENDULUM, **fields), axes=PENDULUM_AXES, n_seeds=n_seeds)


def classify_grid(n_seeds: int = 4, **base: Any) -> GridSpec:
    """4 lrs x adam x 3 kernel sizes x 2 widths x 4 depths x 3 batch sizes = 288 points.

    Each run trains 200 epochs with the lr decaying linearly to 0.
    """
    fields = dict(CLASSIFY_BASE)
    fields.update(base)
    return GridSpec(base=TrainConfig(task=TaskType.CLASSIFY, **fields), axes=CLASSIFY_AXES, n_seeds=n_seeds)


PRESETS = {
    "pendulum": pendulum_grid,
    "classify": classify_grid,
}
