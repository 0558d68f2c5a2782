"""Training and architecture configuration schemas.

Config files are UTF-8 JSON. Every model rejects unknown keys.

Parameter count of a built model (n = matrix dim, d = algebra dim,
h = kernel_hidden, c₀..c_L = channel widths, F = lifting features,
o = head outputs):

    c₀(F + 1)
    + Σₗ [ n²(d + 1) + h(n² + 1) + cₗ₊₁cₗ(h + 1) + 1 ]
    + o(c_L + 1)

F = k²·image_channels for images and 1 + d for the scalar time lifting;
o = n_classes for classification and 2 for the pendulum.

Classification runs default to the settings in CLASSIFY_DEFAULTS: a rotation
grid of 16 samples, an identity mapping activation started at the linear
exponential, and a lifting kernel spanning the whole image.
"""
import hashlib
import json
from enum import Enum
from pathlib import Path
from typing import Annotated, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from interfaces.errors import ConfigError
from interfaces.lie_group import GroupId
from interfaces.models import Activation, PoolMode, TaskType
from lie.actions import ImageActionMethod

DEFAULT_KERNEL_SIZE = 3


class OptimizerKind(Enum):
    ADAM = "adam"
    SGD = "sgd"


class SamplingScheme(Enum):
    """How the algebra sample set {xᵢ} is chosen.

    GRID spaces n_algebra_samples rotation angles evenly over the rotation
    bound with zero translation.
    """
    UNIFORM = "uniform"
    C4 = "c4"
    GRID = "grid"


class LrSchedule(Enum):
    CONSTANT = "constant"
    LINEAR = "linear"


class AngleLaw(Enum):
    UNIFORM = "uniform"
    C4 = "c4"


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class ArchitectureConfig(_Strict):
    """Shape of a Lie conv model; see the module docstring for its parameter count."""
    task: TaskType = TaskType.PENDULUM
    group: GroupId = GroupId.SO2
    n_hidden_layers: int = Field(1, ge=1)
    hidden_channels: int = Field(16, ge=1)
    channel_plan: Optional[List[int]] = None
    kernel_hidden: int = Field(32, ge=1)
    kernel_activation: Activation = Activation.RELU
    mapping_activation: Activation = Activation.SIGMOID
    n_algebra_samples: int = Field(8, ge=1)
    algebra_bounds: Optional[List[Tuple[float, float]]] = None
    sampling: SamplingScheme = SamplingScheme.UNIFORM
    n_out_points: Optional[int] = Field(None, ge=1)
    strict_mode: bool = False
    pool: PoolMode = PoolMode.MEAN
    lifting_method: ImageActionMethod = ImageActionMethod.BILINEAR
    kernel_size: int = Field(3, ge=1)
    image_channels: int = Field(1, ge=1)
    n_classes: Optional[int] = Field(None, ge=2)
    time_scale: float = Field(60.0, gt=0)
    seed: int = Field(0, ge=0)

    @model_validator(mode="after")
    def _check_classes(self) -> "ArchitectureConfig":
        if self.task is TaskType.CLASSIFY and self.n_classes is None:
            raise ValueError("classification needs n_classes")
        return self

    def channel_widths(self) -> List[int]:
        """Widths c₀ (lifting output) through c_L (last Lie conv output)."""
        if self.channel_plan is None:
            return [self.hidden_channels] * (self.n_hidden_layers + 1)
        if len(self.channel_plan) != self.n_hidden_layers + 1:
            raise ConfigError(
                f"channel_plan has {len(self.channel_plan)} widths, "
                f"{self.n_hidden_layers} layers need {self.n_hidden_layers + 1}"
            )
        if min(self.channel_plan) < 1:
            raise ConfigError("channel widths must be positive")
        return list(self.channel_plan)

    @property
    def output_dim(self) -> int:
        return self.n_classes if self.task is TaskType.CLASSIFY else 2


class PendulumDataConfig(_Strict):
    """Damped pendulum trajectory; defaults are the published setting."""
    kind: Literal["pendulum"] = "pendulum"
    m: float = Field(1.0, gt=0)
    L: float = Field(1.0, gt=0)
    g: float = 9.8
    lam: float = Field(0.2, ge=0, alias="lambda")
    theta0: float = float(np.pi / 3.0)
    omega0: float = 0.0
    dt: float = Field(0.01, gt=0)
    n_steps: int = Field(6000, ge=1)
    split: float = Field(0.9, gt=0, lt=1)
    validation: bool = False


class SyntheticDataConfig(_Strict):
    """Rotated glyph classification set."""
    kind: Literal["synthetic"] = "synthetic"
    classes: int = Field(4, ge=2, le=10)
    n_per_class: int = Field(100, ge=1)
    size: int = Field(16, ge=8)
    angle_law: AngleLaw = AngleLaw.UNIFORM
    seed: int = Field(0, ge=0)
    test_fraction: float = Field(0.2, gt=0, lt=1)
    path: Optional[str] = None


class IdxDataConfig(_Strict):
    """IDX image/label files; without a test pair a chronological holdout is used."""
    kind: Literal["idx"] = "idx"
    images_path: str
    labels_path: str
    test_images_path: Optional[str] = None
    test_labels_path: Optional[str] = None
    test_fraction: float = Field(0.2, gt=0, lt=1)
    limit: Optional[int] = Field(None, ge=1)
    n_classes: int = Field(10, ge=2)


DataConfig = Annotated[
    Union[PendulumDataConfig, SyntheticDataConfig, IdxDataConfig],
    Field(discriminator="kind"),
]


CLASSIFY_DEFAULTS = {
    "lr": 1e-2,
    "sampling": SamplingScheme.GRID,
    "n_algebra_samples": 16,
    "mapping_activation": Activation.IDENTITY,
}


class TrainConfig(_Strict):
    """One training run."""
    task: TaskType = TaskType.PENDULUM
    group: GroupId = GroupId.SO2
    lr: float = Field(1e-3, ge=0)
    optimizer: OptimizerKind = OptimizerKind.ADAM
    lr_schedule: Optional[LrSchedule] = None
    kernel_hidden: int = Field(32, ge=1)
    kernel_size: Optional[int] = Field(None, ge=1)
    n_hidden_layers: int = Field(1, ge=1)
    hidden_channels: int = Field(16, ge=1)
    batch_size: int = Field(32, ge=1)
    epochs: int = Field(100, ge=1)
    n_algebra_samples: int = Field(8, ge=1)
    algebra_bounds: Optional[List[Tuple[float, float]]] = None
    sampling: SamplingScheme = SamplingScheme.UNIFORM
    lifting_method: ImageActionMethod = ImageActionMethod.BILINEAR
    pool: PoolMode = PoolMode.MEAN
    mapping_activation: Activation = Activation.SIGMOID
    kernel_activation: Activation = Activation.RELU
    strict_mode: bool = False
    pretrain_mapping: bool = False
    seed: int = Field(0, ge=0)
    data: Optional[DataConfig] = None

    @model_validator(mode="before")
    @classmethod
    def _classify_defaults(cls, values):
        if not isinstance(values, dict):
            return values
        if TaskType(values.get("task", TaskType.PENDULUM)) is not TaskType.CLASSIFY:
            return values
        return {**CLASSIFY_DEFAULTS, **values}

    @model_validator(mode="after")
    def _check_task_data(self) -> "TrainConfig":
        if self.data is None:
            default = PendulumDataConfig() if self.task is TaskType.PENDULUM else SyntheticDataConfig()
            self.data = default
        pendulum_data = isinstance(self.data, PendulumDataConfig)
        if pendulum_data != (self.task is TaskType.PENDULUM):
            raise ValueError(f"data kind '{self.data.kind}' does not fit task '{self.task.value}'")
        return self

    @property
    def schedule(self) -> LrSchedule:
        """Linear decay for classification, constant for the pendulum unless overridden."""
        if self.lr_schedule is not None:
            return self.lr_schedule
        return LrSchedule.LINEAR if self.task is TaskType.CLASSIFY else LrSchedule.CONSTANT

    def architecture(self, n_classes: Optional[int] = None, image_channels: int = 1,
                     time_scale: float = 60.0, image_size: Optional[int] = None) -> ArchitectureConfig:
        """Model shape for this run; a missing kernel_size spans the whole image."""
        kernel_size = self.kernel_size
        if kernel_size is None:
            kernel_size = image_size if image_size is not None else DEFAULT_KERNEL_SIZE
        return ArchitectureConfig(
            task=self.task,
            group=self.group,
            n_hidden_layers=self.n_hidden_layers,
            hidden_channels=self.hidden_channels,
            kernel_hidden=self.kernel_hidden,
            kernel_activation=self.kernel_activation,
            mapping_activation=self.mapping_activation,
            n_algebra_samples=self.n_algebra_samples,
            algebra_bounds=self.algebra_bounds,
            sampling=self.sampling,
            strict_mode=self.strict_mode,
            pool=self.pool,
            lifting_method=self.lifting_method,
            kernel_size=kernel_size,
            image_channels=image_channels,
            n_classes=n_classes,
            time_scale=time_scale,
            seed=self.seed,
        )

    def canonical_json(self) -> str:
        """Key-sorted JSON used for hashing and ledgers."""
        return json.dumps(self.model_dump(mode="json", by_alias=True), sort_keys=True)

    def fingerprint(self) -> str:
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()[:16]

    @classmethod
    def from_json_file(cls, path) -> "TrainConfig":
        return cls.model_validate_json(Path(path).read_text(encoding="utf-8"))
