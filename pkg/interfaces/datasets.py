"""Dataset value types."""
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from interfaces.errors import ConfigError, ConsistencyError, InvalidArgumentError


@dataclass(frozen=True)
class PendulumParams:
    """Damped linear pendulum θ'' + (λ/m)θ' + (g/L)θ = 0 with g the restoring magnitude."""
    m: float = 1.0
    L: float = 1.0
    g: float = 9.8
    lam: float = 0.2
    theta0: float = float(np.pi / 3.0)
    omega0: float = 0.0
    dt: float = 0.01
    n_steps: int = 6000

    def __post_init__(self):
        if self.m <= 0 or self.L <= 0 or self.dt <= 0:
            raise InvalidArgumentError("m, L and dt must be positive")
        if self.n_steps < 1:
            raise InvalidArgumentError(f"n_steps must be at least 1, got {self.n_steps}")
        if not all(np.isfinite([self.g, self.lam, self.theta0, self.omega0])):
            raise InvalidArgumentError("pendulum parameters must be finite")


@dataclass
class Trajectory:
    """States at t = dt, 2dt, ..., n·dt; xy = (L sin θ, -L cos θ)."""
    t: np.ndarray
    theta: np.ndarray
    omega: np.ndarray
    xy: np.ndarray

    def __len__(self) -> int:
        return int(self.t.size)


@dataclass
class TimeSeriesSet:
    """Regression pairs t → (x, y)."""
    t: np.ndarray
    xy: np.ndarray

    def __len__(self) -> int:
        return int(self.t.size)


@dataclass
class LabeledImageSet:
    """Images [B x H x W] in [0, 1] with integer labels below n_classes."""
    images: np.ndarray
    labels: np.ndarray
    n_classes: int
    meta: str = "synthetic"
    angles: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        self.images = np.asarray(self.images, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.images.shape[0] != self.labels.shape[0]:
            raise ConsistencyError(
                f"{self.images.shape[0]} images but {self.labels.shape[0]} labels"
            )
        if self.labels.size and (self.labels.min() < 0 or self.labels.max() >= self.n_classes):
            raise ConsistencyError(f"labels fall outside [0, {self.n_classes})")

    def __len__(self) -> int:
        return int(self.labels.size)

    def subset(self, indices) -> "LabeledImageSet":
        indices = np.asarray(indices, dtype=np.int64)
        angles = self.angles[indices] if self.angles.size == len(self) else np.zeros(0)
        return LabeledImageSet(self.images[indices], self.labels[indices], self.n_classes, self.meta, angles)

    def split(self, test_fraction: float, seed: int = 0) -> Tuple["LabeledImageSet", "LabeledImageSet"]:
        """Seeded shuffled (train, test) split."""
        n_test = int(np.floor(test_fraction * len(self)))
        if n_test < 1 or n_test >= len(self):
            raise ConfigError(f"test fraction {test_fraction} leaves an empty split of {len(self)} items")
        order = np.random.default_rng(seed).permutation(len(self))
        return self.subset(order[n_test:]), self.subset(order[:n_test])
