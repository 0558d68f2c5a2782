"""Invariant pooling over the algebra-sample axis."""
from diffgraph import ops
from diffgraph.node import GraphNode, constant
from interfaces.errors import InvalidArgumentError
from interfaces.models import PoolMode


def pool_invariant(values, mode: PoolMode = PoolMode.MEAN) -> GraphNode:
    """Reduce [N x c] to [c], or [B x N x c] to [B x c]."""
    values = constant(values)
    if values.value.ndim not in (2, 3) or values.shape[-2] < 1:
        raise InvalidArgumentError(f"pooling expects [.. x N x c] with N >= 1, got {values.shape}")
    axis = values.value.ndim - 2
    if PoolMode(mode) is PoolMode.MAX:
        return ops.max_reduce(values, axis=axis)
    return ops.mean(values, axis=axis)
