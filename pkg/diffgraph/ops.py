"""Differentiable node operations.

Each op builds a GraphNode whose backward rule maps the upstream gradient to
one gradient per parent. Elementwise ops accept equal shapes, or a scalar
(shape () or (1,)) with any tensor; there is no other broadcasting.
"""
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from diffgraph.linalg import batched_inverse
from diffgraph.node import GraphNode, Tensor, constant
from interfaces.errors import InvalidArgumentError, ShapeError

NodeLike = Union[GraphNode, np.ndarray, float]


def _node(x: NodeLike) -> GraphNode:
    return x if isinstance(x, GraphNode) else constant(x)


def _is_scalar(shape: Tuple[int, ...]) -> bool:
    return shape == () or shape == (1,)


def _check_elementwise(a: GraphNode, b: GraphNode, op: str):
    if a.shape != b.shape and not (_is_scalar(a.shape) or _is_scalar(b.shape)):
        raise ShapeError(f"{op}: shapes {a.shape} and {b.shape} differ")


def _reduce_to(grad: Tensor, shape: Tuple[int, ...]) -> Tensor:
    if grad.shape == shape:
        return grad
    return np.reshape(np.sum(grad), shape)


def add(a: NodeLike, b: NodeLike) -> GraphNode:
    a, b = _node(a), _node(b)
    _check_elementwise(a, b, "add")

    def backward_fn(g):
        return _reduce_to(g, a.shape), _reduce_to(g, b.shape)

    return GraphNode(a.value + b.value, (a, b), "add", backward_fn=backward_fn)


def sub(a: NodeLike, b: NodeLike) -> GraphNode:
    a, b = _node(a), _node(b)
    _check_elementwise(a, b, "sub")

    def backward_fn(g):
        return _reduce_to(g, a.shape), _reduce_to(-g, b.shape)

    return GraphNode(a.value - b.value, (a, b), "sub", backward_fn=backward_fn)


def mul(a: NodeLike, b: NodeLike) -> GraphNode:
    """Elementwise product."""
    a, b = _node(a), _node(b)
    _check_elementwise(a, b, "mul")

    def backward_fn(g):
        return _reduce_to(g * b.value, a.shape), _reduce_to(g * a.value, b.shape)

    return GraphNode(a.value * b.value, (a, b), "mul", backward_fn=backward_fn)


def scale(x: NodeLike, factor: float) -> GraphNode:
    """Multiply by a fixed real number."""
    x = _node(x)
    factor = float(factor)

    def backward_fn(g):
        return (g * factor,)

    return GraphNode(x.value * factor, (x,), "scale", backward_fn=backward_fn)


def matmul(a: NodeLike, b: NodeLike) -> GraphNode:
    """Matrix product of two 2-D tensors."""
    a, b = _node(a), _node(b)
    if a.value.ndim != 2 or b.value.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ShapeError(f"matmul: cannot multiply {a.shape} by {b.shape}")

    def backward_fn(g):
        return g @ b.value.T, a.value.T @ g

    return GraphNode(a.value @ b.value, (a, b), "matmul", backward_fn=backward_fn)


def affine(x: NodeLike, weight: NodeLike, bias: NodeLike) -> GraphNode:
    """x Wᵀ + b for x of shape [B x in] (or [in]), W [out x in], b [out]."""
    x, weight, bias = _node(x), _node(weight), _node(bias)
    if weight.value.ndim != 2 or bias.shape != (weight.shape[0],):
        raise ShapeError(f"affine: weight {weight.shape} and bias {bias.shape} disagree")
    if x.value.ndim not in (1, 2) or x.shape[-1] != weight.shape[1]:
        raise ShapeError(f"affine: input {x.shape} does not match weight {weight.shape}")

    if x.value.ndim == 1:
        value = weight.value @ x.value + bias.value

        def backward_fn(g):
            return weight.value.T @ g, np.outer(g, x.value), g
    else:
        value = x.value @ weight.value.T + bias.value

        def backward_fn(g):
            return g @ weight.value, g.T @ x.value, np.sum(g, axis=0)

    return GraphNode(value, (x, weight, bias), "affine", backward_fn=backward_fn)


def relu(x: NodeLike) -> GraphNode:
    """max(x, 0); the subgradient at 0 is 0."""
    x = _node(x)
    active = x.value > 0.0

    def backward_fn(g):
        return (g * active,)

    return GraphNode(np.where(active, x.value, 0.0), (x,), "relu", backward_fn=backward_fn)


def sigmoid(x: NodeLike) -> GraphNode:
    x = _node(x)
    s = 0.5 * (1.0 + np.tanh(0.5 * x.value))

    def backward_fn(g):
        return (g * s * (1.0 - s),)

    return GraphNode(s, (x,), "sigmoid", backward_fn=backward_fn)


def identity(x: NodeLike) -> GraphNode:
    x = _node(x)

    def backward_fn(g):
        return (g,)

    return GraphNode(x.value, (x,), "identity", backward_fn=backward_fn)


def exp(x: NodeLike) -> GraphNode:
    """Elementwise exponential."""
    x = _node(x)
    e = np.exp(x.value)

    def backward_fn(g):
        return (g * e,)

    return GraphNode(e, (x,), "exp", backward_fn=backward_fn)


def _spread(g: Tensor, shape: Tuple[int, ...], axis: Optional[int]) -> Tensor:
    if axis is None:
        return np.broadcast_to(g, shape).copy()
    return np.broadcast_to(np.expand_dims(g, axis), shape).copy()


def sum(x: NodeLike, axis: Optional[int] = None) -> GraphNode:  # noqa: A001
    x = _node(x)

    def backward_fn(g):
        return (_spread(g, x.shape, axis),)

    return GraphNode(np.sum(x.value, axis=axis), (x,), "sum", backward_fn=backward_fn)


def mean(x: NodeLike, axis: Optional[int] = None) -> GraphNode:
    x = _node(x)
    count = x.value.size if axis is None else x.shape[axis]

    def backward_fn(g):
        return (_spread(g, x.shape, axis) / count,)

    return GraphNode(np.mean(x.value, axis=axis), (x,), "mean", backward_fn=backward_fn)


def max_reduce(x: NodeLike, axis: int) -> GraphNode:
    """Maximum along an axis; ties send gradient to the first maximal entry."""
    x = _node(x)
    winners = np.expand_dims(np.argmax(x.value, axis=axis), axis)

    def backward_fn(g):
        grad = np.zeros_like(x.value)
        np.put_along_axis(grad, winners, np.expand_dims(g, axis), axis=axis)
        return (grad,)

    return GraphNode(np.max(x.value, axis=axis), (x,), "max", backward_fn=backward_fn)


def concat(nodes: Sequence[NodeLike], axis: int = 0) -> GraphNode:
    nodes = [_node(n) for n in nodes]
    if not nodes:
        raise InvalidArgumentError("concat needs at least one node")
    try:
        value = np.concatenate([n.value for n in nodes], axis=axis)
    except ValueError as e:
        raise ShapeError(f"concat: {e}") from e
    splits = np.cumsum([n.shape[axis] for n in nodes])[:-1]

    def backward_fn(g):
        return tuple(np.split(g, splits, axis=axis))

    return GraphNode(value, nodes, "concat", backward_fn=backward_fn)


def reshape(x: NodeLike, shape: Sequence[int]) -> GraphNode:
    x = _node(x)
    shape = tuple(int(s) for s in shape)
    if int(np.prod(shape)) != x.value.size:
        raise ShapeError(f"reshape: cannot view {x.shape} as {shape}")

    def backward_fn(g):
        return (g.reshape(x.shape),)

    return GraphNode(x.value.reshape(shape), (x,), "reshape", backward_fn=backward_fn)


def transpose(x: NodeLike, axes: Sequence[int]) -> GraphNode:
    """Permute axes."""
    x = _node(x)
    axes = tuple(axes)
    if sorted(axes) != list(range(x.value.ndim)):
        raise ShapeError(f"transpose: {axes} is not a permutation of {x.value.ndim} axes")
    inverse = tuple(np.argsort(axes))

    def backward_fn(g):
        return (np.transpose(g, inverse),)

    return GraphNode(np.transpose(x.value, axes), (x,), "transpose", backward_fn=backward_fn)


def matrix_inverse(a: NodeLike) -> GraphNode:
    """A⁻¹ for an [n x n] matrix or a [B x n x n] stack.

    Backward uses d(A⁻¹) = -A⁻¹ (dA) A⁻¹. Near-singular input raises
    SingularMatrixError carrying the condition estimate and stack index.
    """
    a = _node(a)
    inverse, conditions = batched_inverse(a.value)
    inverse_t = np.swapaxes(inverse, -1, -2)

    def backward_fn(g):
        return (-(inverse_t @ g @ inverse_t),)

    node = GraphNode(inverse, (a,), "matrix_inverse", backward_fn=backward_fn)
    node.condition = conditions
    return node


def mse_loss(prediction: NodeLike, target: NodeLike) -> GraphNode:
    """Mean of squared differences over every entry."""
    prediction, target = _node(prediction), _node(target)
    if prediction.shape != target.shape:
        raise ShapeError(f"mse_loss: prediction {prediction.shape} vs target {target.shape}")
    diff = prediction.value - target.value

    def backward_fn(g):
        grad = g * 2.0 * diff / diff.size
        return grad, -grad

    return GraphNode(np.mean(diff ** 2), (prediction, target), "mse", backward_fn=backward_fn)


def softmax_cross_entropy(logits: NodeLike, labels: Sequence[int]) -> GraphNode:
    """Mean over the batch of -log softmax(logits)[label]."""
    logits = _node(logits)
    labels = np.asarray(labels, dtype=np.int64)
    if logits.value.ndim != 2 or labels.shape != (logits.shape[0],):
        raise ShapeError(f"softmax_cross_entropy: logits {logits.shape} vs labels {labels.shape}")
    if labels.size and (labels.min() < 0 or labels.max() >= logits.shape[1]):
        raise InvalidArgumentError("label outside the logit range")
    batch = np.arange(labels.size)
    shifted = logits.value - np.max(logits.value, axis=1, keepdims=True)
    log_norm = np.log(np.sum(np.exp(shifted), axis=1))
    value = np.mean(log_norm - shifted[batch, labels])
    probs = np.exp(shifted - log_norm[:, None])

    def backward_fn(g):
        grad = probs.copy()
        grad[batch, labels] -= 1.0
        return (g * grad / labels.size,)

    return GraphNode(value, (logits,), "softmax_xent", backward_fn=backward_fn)


def softmax(logits: Tensor) -> Tensor:
    """Row-wise softmax of a plain array (evaluation only)."""
    shifted = logits - np.max(logits, axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / np.sum(e, axis=-1, keepdims=True)
