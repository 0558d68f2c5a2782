"""Learned algebra-to-group map M(x) = σ(W x + b) reshaped to n x n."""
from typing import List, Optional, Tuple

import numpy as np

from diffgraph import ops
from diffgraph.node import GraphNode, constant
from gconv.init import activate, linear_parameters
from groups.factory import GroupFactory, GroupRef
from interfaces.models import Activation
from lie.algebra import basis_tensor


class MappingNet:
    """Single affine layer plus activation standing in for exp."""

    def __init__(
        self,
        group: GroupRef,
        activation: Activation = Activation.SIGMOID,
        rng: Optional[np.random.Generator] = None,
    ):
        self.group = GroupFactory.describe(group)
        self.activation = Activation(activation)
        rng = rng if rng is not None else np.random.default_rng(0)
        n, d = self.group.matrix_dim, self.group.algebra_dim
        self.weight, self.bias = linear_parameters(rng, d, n * n)

    def parameters(self) -> List[GraphNode]:
        return [self.weight, self.bias]

    @property
    def parameter_count(self) -> int:
        n = self.group.matrix_dim
        return n * n * (self.group.algebra_dim + 1)

    def forward(self, coeffs: GraphNode) -> GraphNode:
        """[N x algebra_dim] coefficients to an [N x n x n] stack."""
        coeffs = constant(coeffs)
        n = self.group.matrix_dim
        flat = activate(ops.affine(coeffs, self.weight, self.bias), self.activation)
        return ops.reshape(flat, (coeffs.shape[0], n, n))

    def matrices(self, coeffs: np.ndarray) -> np.ndarray:
        """Forward values only."""
        return self.forward(constant(np.atleast_2d(coeffs))).value


def linear_exp_weights(group: GroupRef) -> Tuple[np.ndarray, np.ndarray]:
    """(W, b) with W x + b = I + Σ cᵢxᵢ, the first-order part of exp.

    For the nilpotent T2 algebra this is exp itself.
    """
    descriptor = GroupFactory.describe(group)
    n = descriptor.matrix_dim
    weight = basis_tensor(descriptor).reshape(descriptor.algebra_dim, n * n).T.copy()
    return weight, np.eye(n).ravel()


def load_linear_exp(mapping: MappingNet):
    """Set the mapping to the linear part of exp; exact under the identity activation."""
    weight, bias = linear_exp_weights(mapping.group)
    mapping.weight.value = weight
    mapping.bias.value = bias
