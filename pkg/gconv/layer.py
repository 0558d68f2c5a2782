"""Almost-equivariant Lie algebra convolution.

    out[j] = vol_scale · Σᵢ k(M(xᵢ)⁻¹ exp(uⱼ)) f[i]

M is the learned MappingNet in normal mode and exp in strict mode. In strict
mode the inverses are the exact group inverses and MappingNet is never
evaluated, so the layer is a discretized group convolution.
"""
from typing import List, Optional

import numpy as np

from diffgraph import ops
from diffgraph.node import GraphNode, constant, parameter
from gconv.kernel import DEFAULT_HIDDEN, KernelNet
from gconv.mapping import MappingNet
from groups.factory import GroupFactory, GroupRef
from interfaces.errors import InvalidArgumentError, ShapeError
from interfaces.lie_group import AlgebraSampleSet
from interfaces.models import Activation
from lie.algebra import exp_algebra

# λ_reg added to M(x) before inversion
MAPPING_REGULARIZER = 1e-6


class LieConvLayer:
    """Parameters ω (kernel), θ (mapping) and log(vol_scale), plus fixed sample sets."""

    def __init__(
        self,
        group: GroupRef,
        c_in: int,
        c_out: int,
        in_samples: AlgebraSampleSet,
        out_points: Optional[AlgebraSampleSet] = None,
        strict_mode: bool = False,
        kernel_hidden: int = DEFAULT_HIDDEN,
        kernel_activation: Activation = Activation.RELU,
        mapping_activation: Activation = Activation.SIGMOID,
        rng: Optional[np.random.Generator] = None,
    ):
        self.group = GroupFactory.describe(group)
        out_points = out_points if out_points is not None else in_samples
        for samples in (in_samples, out_points):
            if samples.group.id is not self.group.id:
                raise InvalidArgumentError(
                    f"sample set over {samples.group.id.value} used in a {self.group.id.value} layer"
                )
        rng = rng if rng is not None else np.random.default_rng(0)
        n = self.group.matrix_dim
        self.c_in = c_in
        self.c_out = c_out
        self.in_samples = in_samples
        self.out_points = out_points
        self.strict_mode = strict_mode
        self.mapping = MappingNet(self.group, mapping_activation, rng)
        self.kernel = KernelNet(n * n, c_out, c_in, kernel_hidden, kernel_activation, rng=rng)
        self.log_vol = parameter(np.array([-np.log(len(in_samples))]))

        self._in_coeffs = in_samples.coeff_matrix
        self._exact_inverses = np.stack(
            [exp_algebra(x).inverse().matrix for x in in_samples.samples]
        )
        self._exp_out = np.stack([exp_algebra(u).matrix for u in out_points.samples])

    @property
    def n_in(self) -> int:
        return len(self.in_samples)

    @property
    def n_out(self) -> int:
        return len(self.out_points)

    @property
    def vol_scale(self) -> float:
        return float(np.exp(self.log_vol.value[0]))

    def set_vol_scale(self, value: float):
        if value <= 0:
            raise InvalidArgumentError(f"vol_scale must be positive, got {value}")
        self.log_vol.value = np.array([np.log(value)])

    @property
    def exact_inverses(self) -> np.ndarray:
        """exp(xᵢ)⁻¹ stacked as [N_in x n x n]."""
        return self._exact_inverses

    @property
    def out_exponentials(self) -> np.ndarray:
        """exp(uⱼ) stacked as [N_out x n x n]."""
        return self._exp_out

    def parameters(self) -> List[GraphNode]:
        """Declaration order: mapping, kernel, log vol_scale."""
        return self.mapping.parameters() + self.kernel.parameters() + [self.log_vol]

    @property
    def parameter_count(self) -> int:
        return self.mapping.parameter_count + self.kernel.parameter_count + 1

    def mapping_inverses(self) -> GraphNode:
        """(M(xᵢ) + λ_reg I)⁻¹ as an [N_in x n x n] node."""
        n = self.group.matrix_dim
        mapped = self.mapping.forward(constant(self._in_coeffs))
        ridge = np.broadcast_to(MAPPING_REGULARIZER * np.eye(n), mapped.shape).copy()
        return ops.matrix_inverse(ops.add(mapped, constant(ridge)))

    def kernel_matrix(self, strict: Optional[bool] = None) -> GraphNode:
        """Block matrix [N_out·c_out x N_in·c_in] of k(M(xᵢ)⁻¹ exp(uⱼ)), without vol_scale."""
        strict = self.strict_mode if strict is None else strict
        n = self.group.matrix_dim
        n_in, n_out = self.n_in, self.n_out
        inverses = constant(self._exact_inverses) if strict else self.mapping_inverses()

        left = ops.reshape(inverses, (n_in * n, n))
        right = constant(np.transpose(self._exp_out, (1, 0, 2)).reshape(n, n_out * n))
        # rows (i, a), columns (j, l) -> [j, i, a, l]
        products = ops.reshape(ops.matmul(left, right), (n_in, n, n_out, n))
        products = ops.transpose(products, (2, 0, 1, 3))
        weights = self.kernel.forward(ops.reshape(products, (n_out * n_in, n * n)))
        weights = ops.reshape(weights, (n_out, n_in, self.c_out, self.c_in))
        weights = ops.transpose(weights, (0, 2, 1, 3))
        return ops.reshape(weights, (n_out * self.c_out, n_in * self.c_in))

    def forward(self, f_values, strict: Optional[bool] = None) -> GraphNode:
        return lie_conv_forward(self, f_values, strict)


def lie_conv_forward(layer: LieConvLayer, f_values, strict: Optional[bool] = None) -> GraphNode:
    """Apply the layer to [N_in x c_in] or batched [B x N_in x c_in] values.

    `strict` overrides the layer's own mode for this call only.
    """
    f = constant(f_values)
    if f.value.ndim not in (2, 3) or f.shape[-2:] != (layer.n_in, layer.c_in):
        raise ShapeError(
            f"lie conv expects [.. x {layer.n_in} x {layer.c_in}] values, got {f.shape}"
        )
    n_flat = layer.n_in * layer.c_in
    kernel = layer.kernel_matrix(strict)

    if f.value.ndim == 2:
        column = ops.reshape(f, (n_flat, 1))
        out = ops.reshape(ops.matmul(kernel, column), (layer.n_out, layer.c_out))
    else:
        batch = f.shape[0]
        columns = ops.transpose(ops.reshape(f, (batch, n_flat)), (1, 0))
        out = ops.transpose(ops.matmul(kernel, columns), (1, 0))
        out = ops.reshape(out, (batch, layer.n_out, layer.c_out))
    return ops.mul(ops.exp(layer.log_vol), out)
