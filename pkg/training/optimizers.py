"""SGD and Adam updates applied in place to parameter nodes."""
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from diffgraph.node import GraphNode
from interfaces.errors import InvalidArgumentError, ShapeError

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


def _check_shapes(params: Sequence[GraphNode], grads: Sequence[np.ndarray]):
    if len(params) != len(grads):
        raise ShapeError(f"{len(params)} parameters but {len(grads)} gradients")
    for p, g in zip(params, grads):
        if np.shape(g) != p.value.shape:
            raise ShapeError(f"gradient shape {np.shape(g)} does not match parameter {p.value.shape}")


def sgd_step(params: Sequence[GraphNode], grads: Sequence[np.ndarray], lr: float):
    """p ← p - lr·g."""
    _check_shapes(params, grads)
    for p, g in zip(params, grads):
        p.value -= lr * np.asarray(g, dtype=np.float64)


@dataclass
class AdamState:
    """First and second moments per parameter, plus the step counter."""
    m: List[np.ndarray] = field(default_factory=list)
    v: List[np.ndarray] = field(default_factory=list)
    t: int = 0

    @classmethod
    def zeros(cls, params: Sequence[GraphNode]) -> "AdamState":
        return cls(
            m=[np.zeros_like(p.value) for p in params],
            v=[np.zeros_like(p.value) for p in params],
        )


def adam_step(
    params: Sequence[GraphNode],
    grads: Sequence[np.ndarray],
    lr: float,
    state: AdamState,
    beta1: float = ADAM_BETA1,
    beta2: float = ADAM_BETA2,
    eps: float = ADAM_EPS,
):
    """Bias-corrected Adam update."""
    _check_shapes(params, grads)
    if len(state.m) != len(params):
        raise ShapeError(f"Adam state tracks {len(state.m)} parameters, got {len(params)}")
    state.t += 1
    correction1 = 1.0 - beta1 ** state.t
    correction2 = 1.0 - beta2 ** state.t
    for i, (p, g) in enumerate(zip(params, grads)):
        g = np.asarray(g, dtype=np.float64)
        state.m[i] = beta1 * state.m[i] + (1.0 - beta1) * g
        state.v[i] = beta2 * state.v[i] + (1.0 - beta2) * g * g
        m_hat = state.m[i] / correction1
        v_hat = state.v[i] / correction2
        p.value -= lr * m_hat / (np.sqrt(v_hat) + eps)


class Optimizer:
    """Steps a fixed parameter list using the gradients held in each node."""

    def __init__(self, params: Sequence[GraphNode], lr: float):
        if lr < 0:
            raise InvalidArgumentError(f"learning rate must be non-negative, got {lr}")
        self.params = list(params)
        self.lr = lr

    def zero_grad(self):
        for p in self.params:
            p.grad = np.zeros_like(p.value)

    def step(self, lr: Optional[float] = None):
        raise NotImplementedError


class SGD(Optimizer):
    def step(self, lr: Optional[float] = None):
        sgd_step(self.params, [p.grad for p in self.params], self.lr if lr is None else lr)


class Adam(Optimizer):
    def __init__(self, params: Sequence[GraphNode], lr: float,
                 beta1: float = ADAM_BETA1, beta2: float = ADAM_BETA2, eps: float = ADAM_EPS):
        super().__init__(params, lr)
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.state = AdamState.zeros(self.params)

    def step(self, lr: Optional[float] = None):
        adam_step(
            self.params,
            [p.grad for p in self.params],
            self.lr if lr is None else lr,
            self.state,
            self.beta1,
            self.beta2,
            self.eps,
        )


def linear_decay(base_lr: float, step: int, total_steps: int) -> float:
    """base_lr · (1 - step / total_steps), reaching 0 after the last step."""
    return base_lr * (1.0 - step / max(total_steps, 1))
