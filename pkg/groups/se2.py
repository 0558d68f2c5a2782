"""Special Euclidean group SE(2) in 3x3 homogeneous form."""
from typing import List, Tuple

import numpy as np

from groups.so2 import checked_angle
from interfaces.lie_group import GroupDescriptor, GroupElement, GroupId, ILieGroup, Interval


def _v_coefficients(theta: float) -> Tuple[float, float]:
    """Entries (a, b) of V(θ) = [[a, -b], [b, a]], the translation part of exp.

    a = sin θ / θ and b = (1 - cos θ) / θ, both written through sinc so they
    stay accurate as θ → 0.
    """
    a = float(np.sinc(theta / np.pi))
    b = 0.5 * theta * float(np.sinc(theta / (2.0 * np.pi))) ** 2
    return a, b


class SE2Group(ILieGroup):
    """se(2) basis: rotation generator, x-translation, y-translation."""

    _descriptor = GroupDescriptor(id=GroupId.SE2, matrix_dim=3, algebra_dim=3, compact=False)

    @property
    def descriptor(self) -> GroupDescriptor:
        return self._descriptor

    def generators(self) -> List[np.ndarray]:
        rot = np.zeros((3, 3))
        rot[0, 1], rot[1, 0] = -1.0, 1.0
        tx = np.zeros((3, 3))
        tx[0, 2] = 1.0
        ty = np.zeros((3, 3))
        ty[1, 2] = 1.0
        return [rot, tx, ty]

    def log(self, g: GroupElement) -> np.ndarray:
        theta = checked_angle(g.rotation_block)
        a, b = _v_coefficients(theta)
        tx, ty = g.translation
        # V⁻¹ = [[a, b], [-b, a]] / (a² + b²)
        det = a * a + b * b
        vx = (a * tx + b * ty) / det
        vy = (-b * tx + a * ty) / det
        return np.array([theta, vx, vy])

    def default_bounds(self) -> Tuple[Interval, ...]:
        return ((-np.pi, np.pi), (-1.0, 1.0), (-1.0, 1.0))
