"""Translation group T(2) in 3x3 homogeneous form."""
from typing import List, Tuple

import numpy as np

from interfaces.lie_group import GroupDescriptor, GroupElement, GroupId, ILieGroup, Interval


class T2Group(ILieGroup):
    """t(2) is abelian and nilpotent, so exp is I + Σ cᵢxᵢ."""

    _descriptor = GroupDescriptor(id=GroupId.T2, matrix_dim=3, algebra_dim=2, compact=False)

    @property
    def descriptor(self) -> GroupDescriptor:
        return self._descriptor

    def generators(self) -> List[np.ndarray]:
        tx = np.zeros((3, 3))
        tx[0, 2] = 1.0
        ty = np.zeros((3, 3))
        ty[1, 2] = 1.0
        return [tx, ty]

    def log(self, g: GroupElement) -> np.ndarray:
        return np.array(g.translation, dtype=np.float64)

    def default_bounds(self) -> Tuple[Interval, ...]:
        return ((-1.0, 1.0), (-1.0, 1.0))
