"""Hyers–Ulam recovery of an isometry from an ε-isometry, and Fickett's bound.

For T with T(0) = 0 the limit I(x) = lim T(2ᵏx)/2ᵏ is an isometry with
‖T(x) - I(x)‖ < 10ε. Surjectivity of T is assumed, not checked.
"""
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

import numpy as np
import structlog
from dataclasses_json import dataclass_json

from interfaces.errors import ConvergenceError, InvalidArgumentError, PreconditionError
from metrics.reports import REPORT_VERSION

logger = structlog.get_logger(__name__)

VectorMap = Callable[[np.ndarray], np.ndarray]

ORIGIN_TOL = 1e-12
ISOMETRY_TOL = 1e-6
DEFAULT_GRID_POINTS = 64
DEFAULT_GRID_RADIUS = 4.0
DEFAULT_TOL = 1e-9
DEFAULT_MAX_DOUBLINGS = 60


@dataclass_json
@dataclass
class UlamReport:
    n_iters: int
    max_gap: float
    eps_in: float
    bound_ok: bool
    recovered_defect: float
    is_isometry: bool
    halving_residual: float
    grid_size: int
    report_version: int = REPORT_VERSION


@dataclass
class UlamResult:
    """Outcome of the doubling iteration; `recovered` evaluates I."""
    n_iters: int
    max_gap: float
    eps_in: float
    bound_ok: bool
    recovered_defect: float
    is_isometry: bool
    halving_residual: float
    grid_size: int
    recovered: VectorMap

    def report(self) -> UlamReport:
        return UlamReport(
            n_iters=self.n_iters,
            max_gap=self.max_gap,
            eps_in=self.eps_in,
            bound_ok=self.bound_ok,
            recovered_defect=self.recovered_defect,
            is_isometry=self.is_isometry,
            halving_residual=self.halving_residual,
            grid_size=self.grid_size,
        )


def default_grid(n_points: int = DEFAULT_GRID_POINTS, radius: float = DEFAULT_GRID_RADIUS,
                 dim: int = 2, seed: int = 0) -> np.ndarray:
    """n_points uniform in the radius ball, followed by the origin."""
    if n_points < 1 or radius <= 0:
        raise InvalidArgumentError("grid needs at least one point and a positive radius")
    rng = np.random.default_rng(seed)
    directions = rng.standard_normal((n_points, dim))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = radius * rng.uniform(0.0, 1.0, n_points) ** (1.0 / dim)
    return np.vstack([directions * radii[:, None], np.zeros((1, dim))])


def isometry_defect(images: np.ndarray, grid: np.ndarray) -> float:
    """sup over grid pairs of |‖T(x) - T(y)‖ - ‖x - y‖|."""
    mapped = np.linalg.norm(images[:, None, :] - images[None, :, :], axis=-1)
    original = np.linalg.norm(grid[:, None, :] - grid[None, :, :], axis=-1)
    return float(np.max(np.abs(mapped - original)))


def _evaluate(T: VectorMap, points: np.ndarray) -> np.ndarray:
    return np.stack([np.asarray(T(p), dtype=np.float64) for p in points])


def _doubling(T: VectorMap, k: int) -> VectorMap:
    scale = 2.0 ** k
    return lambda x: np.asarray(T(scale * np.asarray(x, dtype=np.float64)), dtype=np.float64) / scale


def ulam_recover(
    T: VectorMap,
    grid: Optional[np.ndarray] = None,
    tol: float = DEFAULT_TOL,
    max_doublings: int = DEFAULT_MAX_DOUBLINGS,
) -> UlamResult:
    """Iterate T(2ᵏx)/2ᵏ until successive iterates differ by < tol everywhere on the grid."""
    grid = default_grid() if grid is None else np.atleast_2d(np.asarray(grid, dtype=np.float64))
    if tol <= 0 or max_doublings < 1:
        raise InvalidArgumentError("tol must be positive and max_doublings at least 1")
    origin = np.asarray(T(np.zeros(grid.shape[1])), dtype=np.float64)
    if np.linalg.norm(origin) > ORIGIN_TOL:
        raise PreconditionError(f"T(0) = {origin} is not the origin")

    images = _evaluate(T, grid)
    eps_in = isometry_defect(images, grid)
    previous = images
    gap = np.inf
    n_iters = 0
    for k in range(1, max_doublings + 1):
        current = _evaluate(_doubling(T, k), grid)
        gap = float(np.max(np.linalg.norm(current - previous, axis=1)))
        previous = current
        if gap < tol:
            n_iters = k
            break
    else:
        raise ConvergenceError(f"no convergence within {max_doublings} doublings", last_gap=gap)

    recovered = _doubling(T, n_iters)
    max_gap = float(np.max(np.linalg.norm(images - previous, axis=1)))
    recovered_defect = isometry_defect(previous, grid)
    halved = _evaluate(_doubling(T, 1), grid)
    result = UlamResult(
        n_iters=n_iters,
        max_gap=max_gap,
        eps_in=eps_in,
        bound_ok=max_gap == 0.0 or max_gap < 10.0 * eps_in,
        recovered_defect=recovered_defect,
        is_isometry=recovered_defect < ISOMETRY_TOL,
        halving_residual=float(np.max(np.linalg.norm(images - halved, axis=1))),
        grid_size=int(grid.shape[0]),
        recovered=recovered,
    )
    if not result.is_isometry:
        logger.warning("ulam_limit_not_isometric", recovered_defect=recovered_defect, eps_in=eps_in)
    return result


def rotation_map(angle: float) -> VectorMap:
    c, s = np.cos(angle), np.sin(angle)
    R = np.array([[c, -s], [s, c]])
    return lambda x: R @ np.asarray(x, dtype=np.float64)


def perturbed_identity_map(amplitude: float) -> VectorMap:
    """x ↦ x + a·sin(‖x‖)·e₁."""
    def fn(x):
        x = np.asarray(x, dtype=np.float64)
        out = x.copy()
        out[0] += amplitude * np.sin(np.linalg.norm(x))
        return out
    return fn


class TableMap:
    """Map known only at tabulated points; other points raise PreconditionError."""

    def __init__(self, inputs: np.ndarray, outputs: np.ndarray):
        inputs = np.atleast_2d(np.asarray(inputs, dtype=np.float64))
        outputs = np.atleast_2d(np.asarray(outputs, dtype=np.float64))
        if inputs.shape != outputs.shape:
            raise InvalidArgumentError(f"table inputs {inputs.shape} and outputs {outputs.shape} differ")
        self._table: Dict[Tuple[float, ...], np.ndarray] = {
            tuple(x): y for x, y in zip(inputs, outputs)
        }
        self.inputs = inputs

    def __call__(self, x) -> np.ndarray:
        key = tuple(np.asarray(x, dtype=np.float64))
        if key not in self._table:
            raise PreconditionError(f"point {key} is not in the table")
        return self._table[key]

    def doubling_grid(self) -> np.ndarray:
        """Table points whose double is also tabulated."""
        rows = [x for x in self.inputs if tuple(2.0 * x) in self._table]
        if not rows:
            raise PreconditionError("no table point has its double in the table")
        return np.stack(rows)


def fickett_bound(eps: float, n: int) -> float:
    """27·ε^(1/2ⁿ)."""
    if n < 2:
        raise InvalidArgumentError(f"n must be at least 2, got {n}")
    if eps <= 0:
        raise InvalidArgumentError(f"eps must be positive, got {eps}")
    return 27.0 * eps ** (1.0 / 2 ** n)
