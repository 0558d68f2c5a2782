"""Model-facing enums and the evaluable map interface used by the meters."""
from abc import ABC, abstractmethod
from enum import Enum

import numpy as np


class Activation(Enum):
    """Pointwise nonlinearity of a network layer."""
    RELU = "relu"
    SIGMOID = "sigmoid"
    IDENTITY = "identity"

    @property
    def lipschitz(self) -> float:
        """Global Lipschitz constant of the nonlinearity."""
        return 0.25 if self is Activation.SIGMOID else 1.0


class PoolMode(Enum):
    """Reduction over the algebra-sample axis."""
    MEAN = "mean"
    MAX = "max"


class TaskType(Enum):
    """Learning task a model head is built for."""
    PENDULUM = "pendulum"
    CLASSIFY = "classify"


class ActionSpace(Enum):
    """Space a model reads from or writes to, fixing how a group acts on it."""
    IMAGE = "image"            # act_image on H x W (x C) grids
    PLANE = "plane"            # act_point on R²
    LOGITS = "logits"          # trivial action
    SCALAR_TIME = "scalar_time"  # trivial action
    OPAQUE = "opaque"          # no action defined


class IEquivariantMap(ABC):
    """A batched map whose input and output spaces carry known group actions."""

    @property
    @abstractmethod
    def input_space(self) -> ActionSpace:
        """Space of a single input."""
        pass

    @property
    @abstractmethod
    def output_space(self) -> ActionSpace:
        """Space of a single output."""
        pass

    @abstractmethod
    def predict(self, inputs: np.ndarray) -> np.ndarray:
        """Evaluate on a batch; the leading axis indexes inputs."""
        pass
