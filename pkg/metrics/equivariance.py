"""Equivariance defect d(f(g·x), g·f(x)) of a batched model."""
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
import structlog
from dataclasses_json import dataclass_json

from gconv.mapping import MappingNet
from groups.factory import GroupFactory, GroupRef
from groups.so2 import rotation_angle
from interfaces.errors import InvalidArgumentError, UnsupportedActionError
from interfaces.lie_group import GroupElement, GroupId
from interfaces.models import ActionSpace, IEquivariantMap
from lie.actions import ImageActionMethod, act_image, act_points, is_quarter_turn
from lie.algebra import exp_algebra
from lie.sampling import sample_algebra
from metrics.reports import REPORT_VERSION

logger = structlog.get_logger(__name__)

_TRIVIAL = (ActionSpace.LOGITS, ActionSpace.SCALAR_TIME)


@dataclass_json
@dataclass
class ElementDefect:
    coeffs: List[float]
    defect: float


@dataclass_json
@dataclass
class EquivarianceReport:
    """max_defect ≥ mean_defect ≥ 0; per_element holds the worst input per element."""
    group: str
    n_group_samples: int
    max_defect: float
    mean_defect: float
    per_element: List[ElementDefect] = field(default_factory=list)
    report_version: int = REPORT_VERSION


def _check_space(space: ActionSpace):
    if space not in _TRIVIAL and space not in (ActionSpace.IMAGE, ActionSpace.PLANE):
        raise UnsupportedActionError(f"no group action defined on {space.value} space")


def act_on_space(space: ActionSpace, g: GroupElement, batch: np.ndarray) -> np.ndarray:
    """Apply g to every item of a batch living in `space`."""
    _check_space(space)
    batch = np.asarray(batch, dtype=np.float64)
    if space in _TRIVIAL:
        return batch
    if space is ActionSpace.PLANE:
        return act_points(g, batch)
    square = batch.shape[1] == batch.shape[2]
    method = ImageActionMethod.EXACT_C4 if square and is_quarter_turn(g) else ImageActionMethod.BILINEAR
    return np.stack([act_image(g, img, method) for img in batch])


def element_coordinates(g: GroupElement) -> List[float]:
    """(angle, translation) coordinates of an explicitly given element."""
    coords = []
    if g.group.id is not GroupId.T2:
        coords.append(rotation_angle(g.rotation_block))
    if g.group.homogeneous:
        coords.extend(float(t) for t in g.translation)
    return coords


def _pairwise(outputs: np.ndarray, expected: np.ndarray) -> np.ndarray:
    diff = (outputs - expected).reshape(outputs.shape[0], -1)
    return np.linalg.norm(diff, axis=1)


def _report(group, coords, defects) -> EquivarianceReport:
    all_defects = np.concatenate(defects)
    return EquivarianceReport(
        group=group.id.value,
        n_group_samples=len(coords),
        max_defect=float(np.max(all_defects)),
        mean_defect=float(np.mean(all_defects)),
        per_element=[
            ElementDefect(coeffs=[float(c) for c in cs], defect=float(np.max(d)))
            for cs, d in zip(coords, defects)
        ],
    )


def equivariance_error(
    model: IEquivariantMap,
    group: GroupRef,
    inputs: np.ndarray,
    n_group_samples: int = 16,
    seed: int = 0,
    elements: Optional[Sequence[GroupElement]] = None,
) -> EquivarianceReport:
    """Euclidean defect over every (g, x) pair.

    Elements are exp of uniform algebra samples unless given explicitly.
    """
    descriptor = GroupFactory.describe(group)
    _check_space(model.input_space)
    _check_space(model.output_space)
    if elements is None:
        samples = sample_algebra(descriptor, count=n_group_samples, seed=seed)
        elements = [exp_algebra(x) for x in samples.samples]
        coords = [list(x.coeffs) for x in samples.samples]
    else:
        elements = list(elements)
        if not elements:
            raise InvalidArgumentError("need at least one group element")
        coords = [element_coordinates(g) for g in elements]

    inputs = np.asarray(inputs, dtype=np.float64)
    base = np.asarray(model.predict(inputs))
    defects = []
    for g in elements:
        moved = np.asarray(model.predict(act_on_space(model.input_space, g, inputs)))
        defects.append(_pairwise(moved, act_on_space(model.output_space, g, base)))
    report = _report(descriptor, coords, defects)
    logger.debug("equivariance_measured", group=report.group, max_defect=report.max_defect)
    return report


def _apply_matrix(space: ActionSpace, matrix: np.ndarray, batch: np.ndarray) -> np.ndarray:
    if space in _TRIVIAL:
        return batch
    if space is not ActionSpace.PLANE:
        raise UnsupportedActionError(f"Φ(x) cannot act on {space.value} outputs")
    if matrix.shape == (2, 2):
        return batch @ matrix.T
    homogeneous = np.concatenate([batch, np.ones((batch.shape[0], 1))], axis=1)
    return (homogeneous @ matrix.T)[:, :2]


def algebra_equivariance_error(
    model: IEquivariantMap,
    group: GroupRef,
    inputs: np.ndarray,
    mapping: Optional[MappingNet] = None,
    n_samples: int = 16,
    seed: int = 0,
) -> EquivarianceReport:
    """Defect ‖f(exp(x)·v) - Φ(x) f(v)‖ with Φ = exp, or a MappingNet when given.

    Φ(x) acts linearly on plane outputs (homogeneous coordinates for 3x3 groups).
    """
    descriptor = GroupFactory.describe(group)
    _check_space(model.input_space)
    if model.output_space not in _TRIVIAL and model.output_space is not ActionSpace.PLANE:
        raise UnsupportedActionError(f"Φ(x) cannot act on {model.output_space.value} outputs")
    samples = sample_algebra(descriptor, count=n_samples, seed=seed)
    inputs = np.asarray(inputs, dtype=np.float64)
    base = np.asarray(model.predict(inputs))
    defects = []
    for x in samples.samples:
        g = exp_algebra(x)
        phi = g.matrix if mapping is None else mapping.matrices(x.coeffs)[0]
        moved = np.asarray(model.predict(act_on_space(model.input_space, g, inputs)))
        defects.append(_pairwise(moved, _apply_matrix(model.output_space, phi, base)))
    return _report(descriptor, [list(x.coeffs) for x in samples.samples], defects)
