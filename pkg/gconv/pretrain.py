"""Fit MappingNet to exp on a layer's sample set before main training."""
from dataclasses import dataclass
from typing import List

import numpy as np
import structlog
from dataclasses_json import dataclass_json

from diffgraph import ops
from diffgraph.node import backward, constant
from gconv.mapping import MappingNet
from interfaces.lie_group import AlgebraSampleSet
from lie.algebra import exp_algebra
from training.optimizers import Adam, linear_decay

logger = structlog.get_logger(__name__)

PRETRAIN_STEPS = 500
PRETRAIN_LR = 1e-2
PRETRAIN_TARGET = 1e-3


@dataclass_json
@dataclass
class PretrainResult:
    steps: int
    initial_mse: float
    final_mse: float
    target: float

    @property
    def reached(self) -> bool:
        return self.final_mse < self.target


def mapping_mse(mapping: MappingNet, samples: AlgebraSampleSet) -> float:
    """Mean squared entrywise gap between M(xᵢ) and exp(xᵢ)."""
    targets = np.stack([exp_algebra(x).matrix for x in samples.samples])
    return float(np.mean((mapping.matrices(samples.coeff_matrix) - targets) ** 2))


def pretrain_mapping(
    mapping: MappingNet,
    samples: AlgebraSampleSet,
    steps: int = PRETRAIN_STEPS,
    lr: float = PRETRAIN_LR,
    target: float = PRETRAIN_TARGET,
) -> PretrainResult:
    """Adam with linear lr decay on mse(M(xᵢ), exp(xᵢ))."""
    coeffs = constant(samples.coeff_matrix)
    targets = constant(np.stack([exp_algebra(x).matrix for x in samples.samples]))
    initial = mapping_mse(mapping, samples)
    optimizer = Adam(mapping.parameters(), lr)
    for step in range(steps):
        optimizer.zero_grad()
        backward(ops.mse_loss(mapping.forward(coeffs), targets))
        optimizer.step(linear_decay(lr, step, steps))

    result = PretrainResult(steps=steps, initial_mse=initial,
                            final_mse=mapping_mse(mapping, samples), target=target)
    if result.reached:
        logger.info("mapping_pretrained", initial_mse=initial, final_mse=result.final_mse)
    else:
        logger.warning("mapping_pretrain_missed_target", initial_mse=initial,
                       final_mse=result.final_mse, target=target)
    return result


def pretrain_model_mappings(model, **kwargs) -> List[PretrainResult]:
    """Pretrain every layer's MappingNet on its own input samples."""
    return [pretrain_mapping(layer.mapping, layer.in_samples, **kwargs) for layer in model.layers]

