"""Kernel network k_ω mapping flattened n x n matrices to c_out x c_in weights."""
from typing import List, Optional

import numpy as np

from diffgraph import ops
from diffgraph.node import GraphNode, constant
from gconv.init import activate, linear_parameters
from interfaces.errors import InvalidArgumentError
from interfaces.models import Activation

DEFAULT_HIDDEN = 32


class KernelNet:
    """Two-layer MLP: affine, activation, affine."""

    def __init__(
        self,
        in_dim: int,
        c_out: int,
        c_in: int,
        hidden_width: int = DEFAULT_HIDDEN,
        activation: Activation = Activation.RELU,
        bound_K: float = 1.0,
        rng: Optional[np.random.Generator] = None,
    ):
        if min(in_dim, c_out, c_in, hidden_width) < 1:
            raise InvalidArgumentError("kernel dimensions must be positive")
        if bound_K <= 0:
            raise InvalidArgumentError(f"bound_K must be positive, got {bound_K}")
        rng = rng if rng is not None else np.random.default_rng(0)
        self.in_dim = in_dim
        self.c_out = c_out
        self.c_in = c_in
        self.hidden_width = hidden_width
        self.activation = Activation(activation)
        self.bound_K = float(bound_K)
        self.w1, self.b1 = linear_parameters(rng, in_dim, hidden_width)
        self.w2, self.b2 = linear_parameters(rng, hidden_width, c_out * c_in)

    def parameters(self) -> List[GraphNode]:
        return [self.w1, self.b1, self.w2, self.b2]

    @property
    def parameter_count(self) -> int:
        return self.hidden_width * (self.in_dim + 1) + self.c_out * self.c_in * (self.hidden_width + 1)

    def forward(self, flat_matrices: GraphNode) -> GraphNode:
        """[P x n²] to [P x c_out·c_in]."""
        hidden = activate(ops.affine(flat_matrices, self.w1, self.b1), self.activation)
        return ops.affine(hidden, self.w2, self.b2)

    def evaluate(self, matrices: np.ndarray) -> np.ndarray:
        """Kernel values for a [P x n x n] stack, as [P x c_out x c_in]."""
        matrices = np.asarray(matrices, dtype=np.float64)
        flat = constant(matrices.reshape(matrices.shape[0], -1))
        return self.forward(flat).value.reshape(-1, self.c_out, self.c_in)

    def lipschitz_constant(self) -> float:
        """Upper bound on Lip(k): product of layer spectral norms and activation constant."""
        spectral = np.linalg.norm(self.w1.value, 2) * np.linalg.norm(self.w2.value, 2)
        return float(spectral * self.activation.lipschitz)
