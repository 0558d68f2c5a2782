"""Almost-equivariant G-CNN: lift, (Lie conv + relu) x L, invariant pool, affine head."""
from typing import List, Optional

import numpy as np
import structlog

from config.train_config import ArchitectureConfig, SamplingScheme
from diffgraph import ops
from diffgraph.node import GraphNode
from gconv.init import linear_parameters
from gconv.layer import LieConvLayer
from gconv.mapping import load_linear_exp
from gconv.lifting import (
    LiftingKernel,
    ScalarEmbedding,
    SpatialKernel,
    image_features,
    lift_features,
    lift_image,
    lift_scalar_time,
    scalar_features,
)
from gconv.pooling import pool_invariant
from groups.factory import GroupFactory
from interfaces.errors import ConfigError, ShapeError
from interfaces.lie_group import AlgebraSampleSet, GroupId
from interfaces.models import Activation, ActionSpace, IEquivariantMap, TaskType
from lie.actions import ImageActionMethod
from lie.sampling import quarter_turn_grid, rotation_grid, sample_algebra

logger = structlog.get_logger(__name__)


class LieConvModel(IEquivariantMap):
    """Model assembled by build_model."""

    def __init__(
        self,
        arch: ArchitectureConfig,
        samples: AlgebraSampleSet,
        lifting: LiftingKernel,
        layers: List[LieConvLayer],
        head_weight: GraphNode,
        head_bias: GraphNode,
    ):
        self.arch = arch
        self.samples = samples
        self.lifting = lifting
        self.layers = layers
        self.head_weight = head_weight
        self.head_bias = head_bias

    @property
    def task(self) -> TaskType:
        return self.arch.task

    @property
    def input_space(self) -> ActionSpace:
        return ActionSpace.IMAGE if self.task is TaskType.CLASSIFY else ActionSpace.SCALAR_TIME

    @property
    def output_space(self) -> ActionSpace:
        return ActionSpace.LOGITS if self.task is TaskType.CLASSIFY else ActionSpace.PLANE

    @property
    def strict_mode(self) -> bool:
        return all(layer.strict_mode for layer in self.layers)

    def set_strict_mode(self, strict: bool):
        for layer in self.layers:
            layer.strict_mode = strict

    def parameters(self) -> List[GraphNode]:
        """Declaration order: lifting, layers in depth order, head."""
        params = list(self.lifting.parameters())
        for layer in self.layers:
            params.extend(layer.parameters())
        return params + [self.head_weight, self.head_bias]

    def mapping_parameters(self) -> List[GraphNode]:
        return [p for layer in self.layers for p in layer.mapping.parameters()]

    @property
    def parameter_count(self) -> int:
        return int(sum(p.value.size for p in self.parameters()))

    def parameter_vector(self) -> np.ndarray:
        return np.concatenate([p.value.ravel() for p in self.parameters()])

    def load_parameter_vector(self, vector: np.ndarray):
        vector = np.asarray(vector, dtype=np.float64)
        if vector.size != self.parameter_count:
            raise ShapeError(f"model has {self.parameter_count} parameters, got {vector.size}")
        offset = 0
        for p in self.parameters():
            p.value = vector[offset:offset + p.value.size].reshape(p.value.shape).copy()
            p.grad = np.zeros_like(p.value)
            offset += p.value.size

    def prepare(self, inputs) -> np.ndarray:
        """Fixed lifting features [B x N x P x F] for a batch of raw inputs."""
        if self.task is TaskType.CLASSIFY:
            return image_features(inputs, self.samples, self.lifting, self.arch.lifting_method)
        return scalar_features(inputs, self.samples, self.lifting)

    def lift(self, inputs) -> GraphNode:
        """Lifted signal [B x N x c₀] for a batch of raw inputs."""
        if self.task is TaskType.CLASSIFY:
            images = np.asarray(inputs, dtype=np.float64)
            if images.ndim == 2 or (images.ndim == 3 and self.lifting.in_channels > 1):
                images = images[None]
            return lift_image(images, self.samples, self.lifting, self.arch.lifting_method)
        times = np.atleast_1d(np.asarray(inputs, dtype=np.float64))
        return lift_scalar_time(times, self.samples, self.lifting)

    def forward_features(self, features: np.ndarray) -> GraphNode:
        """[B x output_dim] from prepared features."""
        return self._propagate(lift_features(features, self.lifting))

    def _propagate(self, hidden: GraphNode) -> GraphNode:
        for layer in self.layers:
            hidden = ops.relu(layer.forward(hidden))
        pooled = pool_invariant(hidden, self.arch.pool)
        return ops.affine(pooled, self.head_weight, self.head_bias)

    def forward(self, inputs) -> GraphNode:
        return self._propagate(self.lift(inputs))

    def predict(self, inputs: np.ndarray) -> np.ndarray:
        return self.forward(inputs).value


def _sample_sets(arch: ArchitectureConfig):
    group = GroupFactory.describe(arch.group)
    if arch.sampling is SamplingScheme.C4:
        samples = quarter_turn_grid(group)
    elif arch.sampling is SamplingScheme.GRID:
        samples = rotation_grid(group, arch.n_algebra_samples, arch.algebra_bounds)
    else:
        samples = sample_algebra(group, arch.algebra_bounds, arch.n_algebra_samples, seed=arch.seed)
    out_points = None
    if arch.n_out_points is not None:
        out_points = sample_algebra(group, samples.bounds, arch.n_out_points, seed=arch.seed + 1)
    return samples, out_points


def build_model(arch: ArchitectureConfig, rng: Optional[np.random.Generator] = None) -> LieConvModel:
    """Assemble a model; parameters are drawn from a generator seeded by arch.seed."""
    widths = arch.channel_widths()
    if arch.lifting_method is ImageActionMethod.EXACT_C4 and arch.sampling is not SamplingScheme.C4:
        raise ConfigError("exact_c4 lifting needs the c4 sample grid")
    if arch.sampling in (SamplingScheme.C4, SamplingScheme.GRID) and arch.group is GroupId.T2:
        raise ConfigError(f"{arch.sampling.value} sampling needs a rotation coordinate, T2 has none")
    rng = rng if rng is not None else np.random.default_rng(arch.seed)
    group = GroupFactory.describe(arch.group)
    samples, out_points = _sample_sets(arch)

    if arch.task is TaskType.CLASSIFY:
        lifting = SpatialKernel(arch.kernel_size, arch.image_channels, widths[0], rng)
    else:
        lifting = ScalarEmbedding(group.algebra_dim, widths[0], arch.time_scale, rng)

    layers = []
    in_samples = samples
    for c_in, c_out in zip(widths[:-1], widths[1:]):
        layer = LieConvLayer(
            group,
            c_in,
            c_out,
            in_samples,
            out_points,
            strict_mode=arch.strict_mode,
            kernel_hidden=arch.kernel_hidden,
            kernel_activation=arch.kernel_activation,
            mapping_activation=arch.mapping_activation,
            rng=rng,
        )
        if arch.mapping_activation is Activation.IDENTITY:
            load_linear_exp(layer.mapping)
        layers.append(layer)
        in_samples = layer.out_points
    head_weight, head_bias = linear_parameters(rng, widths[-1], arch.output_dim)

    model = LieConvModel(arch, samples, lifting, layers, head_weight, head_bias)
    logger.debug(
        "model_built",
        group=group.id.value,
        task=arch.task.value,
        layers=len(layers),
        samples=len(samples),
        parameters=model.parameter_count,
    )
    return model


def expected_parameter_count(arch: ArchitectureConfig) -> int:
    """Closed-form count documented in config.train_config."""
    group = GroupFactory.describe(arch.group)
    n2, d, h = group.matrix_dim ** 2, group.algebra_dim, arch.kernel_hidden
    widths = arch.channel_widths()
    if arch.task is TaskType.CLASSIFY:
        features = arch.kernel_size ** 2 * arch.image_channels
    else:
        features = 1 + d
    total = widths[0] * (features + 1)
    for c_in, c_out in zip(widths[:-1], widths[1:]):
        total += n2 * (d + 1) + h * (n2 + 1) + c_out * c_in * (h + 1) + 1
    return total + arch.output_dim * (widths[-1] + 1)
