"""Seeded parameter initialization and activation dispatch."""
from typing import Tuple

import numpy as np

from diffgraph import ops
from diffgraph.node import GraphNode, parameter
from interfaces.models import Activation


def uniform_init(rng: np.random.Generator, shape: Tuple[int, ...], fan_in: int) -> np.ndarray:
    """U(-1/√fan_in, 1/√fan_in) draws."""
    bound = 1.0 / np.sqrt(max(fan_in, 1))
    return rng.uniform(-bound, bound, size=shape)


def linear_parameters(
    rng: np.random.Generator, fan_in: int, fan_out: int
) -> Tuple[GraphNode, GraphNode]:
    """Weight [fan_out x fan_in] and bias [fan_out] of an affine layer."""
    weight = parameter(uniform_init(rng, (fan_out, fan_in), fan_in))
    bias = parameter(uniform_init(rng, (fan_out,), fan_in))
    return weight, bias


def activate(node: GraphNode, activation: Activation) -> GraphNode:
    activation = Activation(activation)
    if activation is Activation.RELU:
        return ops.relu(node)
    if activation is Activation.SIGMOID:
        return ops.sigmoid(node)
    return ops.identity(node)
