"""Almost-equivariance of perturbed rotations of the circle under SO2.

A rotation f(x) = R_α x of S¹ is exactly SO2-equivariant. Perturbing its
angle by η(φ) with sup|η| < ε keeps the map on S¹ within ε of f, and the
measured sup of d(g·f_ε(x), f_ε(g·x)) must stay below 2ε.
"""
from dataclasses import dataclass, field
from typing import List

import numpy as np
import structlog
from dataclasses_json import dataclass_json

from interfaces.errors import InvalidArgumentError
from metrics.reports import REPORT_VERSION

logger = structlog.get_logger(__name__)

MAX_FREQUENCY = 5


@dataclass_json
@dataclass
class CircleTrial:
    rotation: float
    amplitude: float
    frequency: int
    phase: float
    max_defect: float
    ratio: float
    passed: bool


@dataclass_json
@dataclass
class AbelianEquivarianceReport:
    eps: float
    n_trials: int
    n_angles: int
    n_points: int
    passed: int
    max_defect: float
    max_ratio: float
    trials: List[CircleTrial] = field(default_factory=list)
    report_version: int = REPORT_VERSION


def _rotate(angles: np.ndarray, points: np.ndarray) -> np.ndarray:
    c, s = np.cos(angles), np.sin(angles)
    x, y = points[..., 0], points[..., 1]
    return np.stack([c * x - s * y, s * x + c * y], axis=-1)


def perturbed_rotation(rotation: float, amplitude: float, frequency: int, phase: float):
    """x ↦ R(α + a·sin(kφ(x) + ψ)) x on S¹."""
    def fn(points: np.ndarray) -> np.ndarray:
        phi = np.arctan2(points[..., 1], points[..., 0])
        return _rotate(rotation + amplitude * np.sin(frequency * phi + phase), points)
    return fn


def circle_defect(fn, n_angles: int, n_points: int) -> float:
    """sup over a θ x φ grid of ‖R_θ f(x) - f(R_θ x)‖."""
    thetas = 2.0 * np.pi * np.arange(n_angles) / n_angles
    phis = 2.0 * np.pi * np.arange(n_points) / n_points
    points = np.stack([np.cos(phis), np.sin(phis)], axis=1)
    images = fn(points)
    worst = 0.0
    for theta in thetas:
        moved_after = _rotate(np.full(n_points, theta), images)
        moved_before = fn(_rotate(np.full(n_points, theta), points))
        worst = max(worst, float(np.max(np.linalg.norm(moved_after - moved_before, axis=1))))
    return worst


def abelian_equivariance_experiment(
    eps: float,
    n_trials: int = 100,
    seed: int = 0,
    n_angles: int = 100,
    n_points: int = 100,
) -> AbelianEquivarianceReport:
    """Seeded trials of random perturbed rotations; a trial passes when defect < 2ε."""
    if eps <= 0:
        raise InvalidArgumentError(f"eps must be positive, got {eps}")
    if n_trials < 1:
        raise InvalidArgumentError(f"need at least one trial, got {n_trials}")
    rng = np.random.default_rng(seed)
    trials = []
    for _ in range(n_trials):
        rotation = float(rng.uniform(0.0, 2.0 * np.pi))
        amplitude = float(eps * rng.uniform(0.0, 1.0))
        frequency = int(rng.integers(1, MAX_FREQUENCY + 1))
        phase = float(rng.uniform(0.0, 2.0 * np.pi))
        defect = circle_defect(perturbed_rotation(rotation, amplitude, frequency, phase), n_angles, n_points)
        ratio = defect / (2.0 * eps)
        trials.append(CircleTrial(rotation, amplitude, frequency, phase, defect, ratio, ratio < 1.0))

    report = AbelianEquivarianceReport(
        eps=eps,
        n_trials=n_trials,
        n_angles=n_angles,
        n_points=n_points,
        passed=sum(t.passed for t in trials),
        max_defect=max(t.max_defect for t in trials),
        max_ratio=max(t.ratio for t in trials),
        trials=trials,
    )
    logger.info("circle_experiment_finished", eps=eps, passed=report.passed, n_trials=n_trials,
                max_ratio=report.max_ratio)
    return report
