"""Matrix Lie group interface and value types."""
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import List, Sequence, Tuple

import numpy as np

from interfaces.errors import InvalidArgumentError

# SO2 elements must be orthogonal to this tolerance entrywise
ORTHOGONALITY_TOL = 1e-9

Interval = Tuple[float, float]


class GroupId(Enum):
    """Supported matrix Lie groups."""
    SO2 = "SO2"
    SE2 = "SE2"
    T2 = "T2"


@dataclass(frozen=True)
class GroupDescriptor:
    """Static description of a matrix Lie group G ⊆ GL_n(R)."""
    id: GroupId
    matrix_dim: int
    algebra_dim: int
    compact: bool

    def __post_init__(self):
        if self.matrix_dim <= 0 or self.algebra_dim <= 0:
            raise InvalidArgumentError("group dimensions must be positive")
        if self.matrix_dim ** 2 < self.algebra_dim:
            raise InvalidArgumentError(
                f"algebra dimension {self.algebra_dim} exceeds gl({self.matrix_dim})"
            )

    @property
    def homogeneous(self) -> bool:
        """True when elements act on the plane in 3x3 homogeneous form."""
        return self.matrix_dim == 3


def _frozen(array: np.ndarray) -> np.ndarray:
    out = np.array(array, dtype=np.float64, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """Element x = Σ cᵢ xᵢ of the Lie algebra, with its realized matrix."""
    group: GroupDescriptor
    coeffs: np.ndarray
    matrix: np.ndarray

    def __post_init__(self):
        coeffs = _frozen(np.ravel(self.coeffs))
        matrix = _frozen(self.matrix)
        n = self.group.matrix_dim
        if coeffs.shape != (self.group.algebra_dim,):
            raise InvalidArgumentError(
                f"{self.group.id.value} needs {self.group.algebra_dim} coefficients, "
                f"got {coeffs.shape[0]}"
            )
        if matrix.shape != (n, n):
            raise InvalidArgumentError(f"algebra matrix must be {n}x{n}, got {matrix.shape}")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "matrix", matrix)


@dataclass(frozen=True, eq=False)
class GroupElement:
    """Element g of a matrix Lie group, stored as its n x n matrix."""
    group: GroupDescriptor
    matrix: np.ndarray

    def __post_init__(self):
        matrix = _frozen(self.matrix)
        n = self.group.matrix_dim
        if matrix.shape != (n, n):
            raise InvalidArgumentError(f"group matrix must be {n}x{n}, got {matrix.shape}")
        if not np.all(np.isfinite(matrix)):
            raise InvalidArgumentError("group matrix has non-finite entries")
        if self.group.id is GroupId.SO2:
            gram = matrix.T @ matrix
            if (np.max(np.abs(gram - np.eye(2))) > ORTHOGONALITY_TOL
                    or abs(np.linalg.det(matrix) - 1.0) > ORTHOGONALITY_TOL):
                raise InvalidArgumentError("SO2 element is not a rotation matrix")
        elif not np.array_equal(matrix[-1], np.eye(n)[-1]):
            raise InvalidArgumentError(
                f"{self.group.id.value} element must have bottom row (0, ..., 0, 1)"
            )
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def identity(cls, group: GroupDescriptor) -> "GroupElement":
        return cls(group, np.eye(group.matrix_dim))

    @property
    def rotation_block(self) -> np.ndarray:
        return self.matrix[:2, :2]

    @property
    def translation(self) -> np.ndarray:
        if not self.group.homogeneous:
            return np.zeros(2)
        return self.matrix[:2, 2]

    def compose(self, other: "GroupElement") -> "GroupElement":
        """Group product self · other."""
        if other.group.id is not self.group.id:
            raise InvalidArgumentError(
                f"cannot compose {self.group.id.value} with {other.group.id.value}"
            )
        return GroupElement(self.group, self.matrix @ other.matrix)

    def inverse(self) -> "GroupElement":
        """Closed-form inverse; the rotation block is orthogonal for every supported group."""
        rot_t = self.rotation_block.T
        if not self.group.homogeneous:
            return GroupElement(self.group, rot_t)
        inv = np.eye(3)
        inv[:2, :2] = rot_t
        inv[:2, 2] = -rot_t @ self.translation
        return GroupElement(self.group, inv)


@dataclass(frozen=True, eq=False)
class AlgebraSampleSet:
    """Finite sample {xᵢ} of the Lie algebra drawn inside per-coordinate bounds."""
    group: GroupDescriptor
    bounds: Tuple[Interval, ...]
    samples: Tuple[AlgebraElement, ...]
    seed: int = 0
    label: str = "uniform"

    def __post_init__(self):
        if not self.samples:
            raise InvalidArgumentError("sample set must contain at least one element")
        for i, sample in enumerate(self.samples):
            for c, (lo, hi) in zip(sample.coeffs, self.bounds):
                if not lo <= c <= hi:
                    raise InvalidArgumentError(
                        f"sample {i} coefficient {c} outside bounds [{lo}, {hi}]"
                    )

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def coeff_matrix(self) -> np.ndarray:
        """Coefficients stacked as an [N x algebra_dim] array."""
        return np.stack([s.coeffs for s in self.samples])

    @property
    def matrices(self) -> np.ndarray:
        """Realized algebra matrices stacked as [N x n x n]."""
        return np.stack([s.matrix for s in self.samples])


class ILieGroup(ABC):
    """Interface every supported matrix Lie group implements."""

    @property
    @abstractmethod
    def descriptor(self) -> GroupDescriptor:
        """Static descriptor of the group."""
        pass

    @abstractmethod
    def generators(self) -> List[np.ndarray]:
        """Generator basis {xᵢ} of the Lie algebra in documented order."""
        pass

    @abstractmethod
    def log(self, g: GroupElement) -> np.ndarray:
        """Closed-form algebra coefficients c with exp(Σ cᵢxᵢ) = g."""
        pass

    @abstractmethod
    def default_bounds(self) -> Tuple[Interval, ...]:
        """Default per-coordinate sampling box for the algebra."""
        pass

    def validate_bounds(self, bounds: Sequence[Interval]) -> Tuple[Interval, ...]:
        """Check a bounds box has one finite non-degenerate interval per coordinate."""
        bounds = tuple((float(lo), float(hi)) for lo, hi in bounds)
        if len(bounds) != self.descriptor.algebra_dim:
            raise InvalidArgumentError(
                f"{self.descriptor.id.value} needs {self.descriptor.algebra_dim} intervals, "
                f"got {len(bounds)}"
            )
        for lo, hi in bounds:
            if not (np.isfinite(lo) and np.isfinite(hi)) or not lo < hi:
                raise InvalidArgumentError(f"interval [{lo}, {hi}] is empty or inverted")
        return bounds
