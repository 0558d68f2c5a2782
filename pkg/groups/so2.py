"""Rotation group SO(2) of the plane."""
from typing import List, Tuple

import numpy as np

from interfaces.errors import BranchCutError
from interfaces.lie_group import GroupDescriptor, GroupElement, GroupId, ILieGroup, Interval

# Angles this close to ±π sit on the branch cut of atan2
BRANCH_CUT_TOL = 1e-12


def rotation_angle(rotation: np.ndarray) -> float:
    """Angle in (-π, π] of a 2x2 rotation block."""
    return float(np.arctan2(rotation[1, 0], rotation[0, 0]))


def checked_angle(rotation: np.ndarray) -> float:
    """Rotation angle, refusing the ±π branch cut."""
    angle = rotation_angle(rotation)
    if np.pi - abs(angle) < BRANCH_CUT_TOL:
        raise BranchCutError(f"rotation angle {angle} lies on the ±π branch cut")
    return angle


class SO2Group(ILieGroup):
    """so(2) is spanned by the antisymmetric generator J = [[0, -1], [1, 0]]."""

    _descriptor = GroupDescriptor(id=GroupId.SO2, matrix_dim=2, algebra_dim=1, compact=True)

    @property
    def descriptor(self) -> GroupDescriptor:
        return self._descriptor

    def generators(self) -> List[np.ndarray]:
        return [np.array([[0.0, -1.0], [1.0, 0.0]])]

    def log(self, g: GroupElement) -> np.ndarray:
        return np.array([checked_angle(g.matrix)])

    def default_bounds(self) -> Tuple[Interval, ...]:
        return ((-np.pi, np.pi),)
