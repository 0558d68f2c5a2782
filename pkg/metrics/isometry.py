"""Almost-isometry defect of a plane map restricted to the unit circle or disk."""
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np
from dataclasses_json import dataclass_json

from interfaces.errors import InvalidArgumentError, NonFiniteError
from metrics.reports import REPORT_VERSION

PlaneMap = Callable[[np.ndarray], np.ndarray]

JACOBIAN_STEP = 1e-6


class Manifold(Enum):
    UNIT_CIRCLE = "unit_circle"
    DISK = "disk"


@dataclass_json
@dataclass
class IsometryDefectReport:
    """local_max is the pointwise sup; global_integral ≤ local_max · volume."""
    domain: str
    local_max: float
    global_integral: float
    volume: float
    grid_resolution: int
    report_version: int = REPORT_VERSION


def jacobian(fn: PlaneMap, p: np.ndarray, h: float = JACOBIAN_STEP) -> np.ndarray:
    """2x2 central-difference Jacobian."""
    p = np.asarray(p, dtype=np.float64)
    columns = []
    for axis in range(2):
        step = np.zeros(2)
        step[axis] = h
        columns.append((np.asarray(fn(p + step)) - np.asarray(fn(p - step))) / (2.0 * h))
    J = np.stack(columns, axis=1)
    if not np.all(np.isfinite(J)):
        raise NonFiniteError(f"non-finite Jacobian at {p}")
    return J


def _circle_defects(fn: PlaneMap, n_points: int):
    angles = 2.0 * np.pi * np.arange(n_points) / n_points
    defects = np.empty(n_points)
    for k, phi in enumerate(angles):
        tangent = np.array([-np.sin(phi), np.cos(phi)])
        pushed = jacobian(fn, np.array([np.cos(phi), np.sin(phi)])) @ tangent
        defects[k] = abs(1.0 - pushed @ pushed)
    weights = np.full(n_points, 2.0 * np.pi / n_points)
    return defects, weights


def _disk_defects(fn: PlaneMap, n_points: int, n_directions: int):
    n_radii = max(1, int(np.sqrt(n_points)))
    n_angles = max(1, n_points // n_radii)
    radii = (np.arange(n_radii) + 0.5) / n_radii
    angles = 2.0 * np.pi * (np.arange(n_angles) + 0.5) / n_angles
    psi = np.pi * np.arange(n_directions) / n_directions
    directions = np.stack([np.cos(psi), np.sin(psi)], axis=1)

    defects, weights = [], []
    for r in radii:
        for phi in angles:
            J = jacobian(fn, r * np.array([np.cos(phi), np.sin(phi)]))
            gap = directions @ (J.T @ J - np.eye(2)) @ directions.T
            defects.append(float(np.max(np.abs(gap))))
            # polar midpoint rule: r dr dφ
            weights.append(r * (1.0 / n_radii) * (2.0 * np.pi / n_angles))
    return np.array(defects), np.array(weights)


def almost_isometry_defect(
    fn: PlaneMap,
    domain: Manifold = Manifold.UNIT_CIRCLE,
    n_points: int = 256,
    n_directions: int = 16,
) -> IsometryDefectReport:
    """Sup over sampled points and unit tangent pairs of |g(v, w) - g(dφ v, dφ w)|.

    The circle has a one-dimensional tangent space; the disk uses
    `n_directions` unit directions per point.
    """
    domain = Manifold(domain)
    if n_points < 1 or n_directions < 1:
        raise InvalidArgumentError("need at least one point and one direction")
    if domain is Manifold.UNIT_CIRCLE:
        defects, weights = _circle_defects(fn, n_points)
    else:
        defects, weights = _disk_defects(fn, n_points, n_directions)
    return IsometryDefectReport(
        domain=domain.value,
        local_max=float(np.max(defects)),
        global_integral=float(np.sum(defects * weights)),
        volume=float(np.sum(weights)),
        grid_resolution=int(defects.size),
    )
