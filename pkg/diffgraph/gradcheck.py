"""Central finite-difference gradient checks."""
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from diffgraph.node import GraphNode, backward, zero_grad

FD_STEP = 1e-6
# Relative error denominators never drop below this
REL_ERROR_FLOOR = 1e-3


@dataclass
class GradCheckResult:
    """Worst elementwise disagreement between analytic and numeric gradients."""
    max_abs_error: float
    max_rel_error: float

    def passed(self, tol: float = 1e-4) -> bool:
        return self.max_rel_error < tol


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> np.ndarray:
    denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), REL_ERROR_FLOOR)
    return np.abs(analytic - numeric) / denom


def numeric_gradient(fn: Callable[[], GraphNode], leaf: GraphNode, h: float = FD_STEP) -> np.ndarray:
    """∂fn()/∂leaf by central differences, perturbing leaf.value in place."""
    grad = np.zeros_like(leaf.value)
    flat = leaf.value.reshape(-1)
    out = grad.reshape(-1)
    for i in range(flat.size):
        original = flat[i]
        flat[i] = original + h
        plus = float(fn().value)
        flat[i] = original - h
        minus = float(fn().value)
        flat[i] = original
        out[i] = (plus - minus) / (2.0 * h)
    return grad


def check_gradients(
    fn: Callable[[], GraphNode],
    leaves: Sequence[GraphNode],
    h: float = FD_STEP,
) -> GradCheckResult:
    """Compare backward() against central differences for every leaf.

    `fn` must rebuild the graph from the leaves' current values and return a
    scalar node.
    """
    zero_grad(leaves)
    backward(fn())
    max_abs = 0.0
    max_rel = 0.0
    for leaf in leaves:
        analytic = leaf.grad.copy()
        numeric = numeric_gradient(fn, leaf, h)
        if analytic.size:
            max_abs = max(max_abs, float(np.max(np.abs(analytic - numeric))))
            max_rel = max(max_rel, float(np.max(relative_error(analytic, numeric))))
    zero_grad(leaves)
    return GradCheckResult(max_abs_error=max_abs, max_rel_error=max_rel)
