"""Computation graph nodes, reverse accumulation and gradient reset."""
from typing import Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np

from interfaces.errors import InvalidArgumentError, NonFiniteError

# Tensors are plain row-major float64 numpy arrays
Tensor = np.ndarray

BackwardFn = Callable[[Tensor], Sequence[Optional[Tensor]]]


def as_tensor(value) -> Tensor:
    """Copy `value` into a finite float64 array."""
    data = np.array(value, dtype=np.float64)
    if not np.all(np.isfinite(data)):
        raise NonFiniteError(f"tensor of shape {data.shape} has non-finite entries")
    return data


def _no_backward(grad: Tensor) -> Sequence[Optional[Tensor]]:
    return ()


class GraphNode:
    """A value in the computation graph together with its gradient slot."""

    def __init__(
        self,
        value,
        parents: Sequence["GraphNode"] = (),
        op: str = "leaf",
        requires_grad: bool = False,
        backward_fn: BackwardFn = _no_backward,
    ):
        self.value: Tensor = as_tensor(value)
        self.grad: Tensor = np.zeros_like(self.value)
        self.parents = tuple(parents)
        self.op = op
        self.requires_grad = requires_grad or any(p.requires_grad for p in self.parents)
        self._backward = backward_fn

    @property
    def shape(self):
        return self.value.shape

    @property
    def is_leaf(self) -> bool:
        return not self.parents

    def backward(self):
        backward(self)

    def __repr__(self):
        return f"GraphNode(op={self.op!r}, shape={self.value.shape}, requires_grad={self.requires_grad})"


def parameter(value) -> GraphNode:
    """Trainable leaf."""
    return GraphNode(value, op="param", requires_grad=True)


def constant(value) -> GraphNode:
    """Leaf that never receives gradient."""
    if isinstance(value, GraphNode):
        return value
    return GraphNode(value, op="const", requires_grad=False)


def topological_order(root: GraphNode) -> List[GraphNode]:
    """Nodes that require grad, every node listed after all of its parents."""
    order: List[GraphNode] = []
    visited = set()
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in visited:
            continue
        visited.add(id(node))
        stack.append((node, True))
        for parent in node.parents:
            if parent.requires_grad and id(parent) not in visited:
                stack.append((parent, False))
    return order


def backward(root: GraphNode):
    """Accumulate ∂root/∂node into `grad` for every node that requires grad.

    Gradients add onto whatever the slots already hold; call zero_grad
    between steps.
    """
    if root.value.size != 1:
        raise InvalidArgumentError(
            f"backward needs a scalar root, got shape {root.value.shape}"
        )
    if not root.requires_grad:
        return
    pending: Dict[int, Tensor] = {id(root): np.ones_like(root.value)}
    for node in reversed(topological_order(root)):
        upstream = pending.pop(id(node), None)
        if upstream is None:
            continue
        node.grad = node.grad + upstream
        if not node.parents:
            continue
        for parent, grad in zip(node.parents, node._backward(upstream)):
            if grad is None or not parent.requires_grad:
                continue
            key = id(parent)
            pending[key] = pending[key] + grad if key in pending else grad


def zero_grad(nodes: Iterable[GraphNode]):
    """Reset gradient slots to zero tensors of the value's shape."""
    for node in nodes:
        node.grad = np.zeros_like(node.value)
