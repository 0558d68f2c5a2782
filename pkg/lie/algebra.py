"""Generator bases, algebra elements and the exp/log correspondence."""
from typing import List, Sequence, Tuple

import numpy as np

from groups.factory import GroupFactory, GroupRef
from interfaces.errors import InvalidArgumentError
from interfaces.lie_group import AlgebraElement, GroupDescriptor, GroupElement
from lie.expm import exp_matrix


def generators(group: GroupRef) -> List[np.ndarray]:
    """Generator basis of the group's Lie algebra in its documented order."""
    return GroupFactory.create(group).generators()


def basis_tensor(group: GroupRef) -> np.ndarray:
    """Generators stacked as an [algebra_dim x n x n] array."""
    return np.stack(generators(group))


def algebra_element(group: GroupRef, coeffs: Sequence[float]) -> AlgebraElement:
    """Build x = Σ cᵢ xᵢ from coefficients."""
    descriptor = GroupFactory.describe(group)
    coeffs = np.asarray(coeffs, dtype=np.float64).ravel()
    if coeffs.shape != (descriptor.algebra_dim,):
        raise InvalidArgumentError(
            f"{descriptor.id.value} needs {descriptor.algebra_dim} coefficients, got {coeffs.size}"
        )
    matrix = np.tensordot(coeffs, basis_tensor(descriptor), axes=1)
    return AlgebraElement(descriptor, coeffs, matrix)


def exp_algebra(x: AlgebraElement) -> GroupElement:
    """Push an algebra element onto the group with the matrix exponential."""
    return GroupElement(x.group, exp_matrix(x.matrix))


def group_element(group: GroupRef, coeffs: Sequence[float]) -> GroupElement:
    """exp(Σ cᵢ xᵢ) as a group element."""
    return exp_algebra(algebra_element(group, coeffs))


def log_closed_form(g: GroupElement) -> AlgebraElement:
    """Closed-form inverse of exp on the principal branch."""
    coeffs = GroupFactory.create(g.group).log(g)
    return algebra_element(g.group, coeffs)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Lie bracket [A, B] = AB - BA."""
    return a @ b - b @ a


def project_onto_algebra(group: GroupDescriptor, matrix: np.ndarray) -> Tuple[np.ndarray, float]:
    """Least-squares coefficients and residual of a matrix against the generator span."""
    basis = basis_tensor(group).reshape(group.algebra_dim, -1).T
    coeffs, *_ = np.linalg.lstsq(basis, np.ravel(matrix), rcond=None)
    residual = np.ravel(matrix) - basis @ coeffs
    return coeffs, float(np.max(np.abs(residual))) if residual.size else 0.0
