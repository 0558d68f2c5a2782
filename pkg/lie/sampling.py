"""Uniform (Lebesgue) sampling of Lie algebra coordinates."""
from typing import List, Optional, Sequence

import numpy as np

from groups.factory import GroupFactory, GroupRef
from interfaces.errors import InvalidArgumentError
from interfaces.lie_group import AlgebraSampleSet, GroupElement, GroupId, Interval
from lie.algebra import algebra_element, group_element


def sample_algebra(
    group: GroupRef,
    bounds: Optional[Sequence[Interval]] = None,
    count: int = 1,
    seed: int = 0,
) -> AlgebraSampleSet:
    """Draw `count` i.i.d. uniform coefficient vectors inside `bounds`.

    Defaults to [-π, π] on rotation coordinates and [-1, 1] on translation
    coordinates. The same (seed, bounds, count) always yields the same bytes.
    """
    impl = GroupFactory.create(group)
    if count < 1:
        raise InvalidArgumentError(f"sample count must be at least 1, got {count}")
    bounds = impl.validate_bounds(bounds if bounds is not None else impl.default_bounds())

    lows = np.array([lo for lo, _ in bounds])
    highs = np.array([hi for _, hi in bounds])
    rng = np.random.default_rng(seed)
    coeffs = rng.uniform(lows, highs, size=(count, impl.descriptor.algebra_dim))
    samples = tuple(algebra_element(impl.descriptor, row) for row in coeffs)
    return AlgebraSampleSet(impl.descriptor, bounds, samples, seed=seed, label="uniform")


def samples_from_coeffs(
    group: GroupRef,
    coeff_rows: Sequence[Sequence[float]],
    bounds: Optional[Sequence[Interval]] = None,
    label: str = "grid",
) -> AlgebraSampleSet:
    """Wrap explicit coefficient rows as a sample set; bounds default to their hull."""
    impl = GroupFactory.create(group)
    rows = np.atleast_2d(np.asarray(coeff_rows, dtype=np.float64))
    if bounds is None:
        lows, highs = rows.min(axis=0), rows.max(axis=0)
        bounds = [(lo, hi if hi > lo else lo + 1.0) for lo, hi in zip(lows, highs)]
    bounds = impl.validate_bounds(bounds)
    samples = tuple(algebra_element(impl.descriptor, row) for row in rows)
    return AlgebraSampleSet(impl.descriptor, bounds, samples, seed=0, label=label)


def quarter_turn_grid(group: GroupRef = GroupId.SO2) -> AlgebraSampleSet:
    """Exact C₄ grid {0, π/2, π, 3π/2}·J (zero translation for SE2)."""
    descriptor = GroupFactory.describe(group)
    if descriptor.id is GroupId.T2:
        raise InvalidArgumentError("T2 has no rotation coordinate for a quarter-turn grid")
    rows = np.zeros((4, descriptor.algebra_dim))
    rows[:, 0] = np.arange(4) * (np.pi / 2.0)
    bounds = [(0.0, 1.5 * np.pi)] + [(-1.0, 1.0)] * (descriptor.algebra_dim - 1)
    return samples_from_coeffs(descriptor, rows, bounds, label="c4")


def rotation_elements(n: int, group: GroupRef = GroupId.SO2) -> List[GroupElement]:
    """n rotations at evenly spaced angles 2πk/n, k = 0..n-1."""
    descriptor = GroupFactory.describe(group)
    if descriptor.id is GroupId.T2:
        raise InvalidArgumentError("T2 contains no rotations")
    if n < 1:
        raise InvalidArgumentError(f"need at least one rotation, got {n}")
    elements = []
    for angle in 2.0 * np.pi * np.arange(n) / n:
        coeffs = np.zeros(descriptor.algebra_dim)
        coeffs[0] = angle
        elements.append(group_element(descriptor, coeffs))
    return elements


def rotation_grid(group: GroupRef, count: int, bounds: Optional[Sequence[Interval]] = None) -> AlgebraSampleSet:
    """`count` rotation angles lo + (hi - lo)·k/count over the rotation bound, zero translation."""
    impl = GroupFactory.create(group)
    if impl.descriptor.id is GroupId.T2:
        raise InvalidArgumentError("T2 has no rotation coordinate for a rotation grid")
    if count < 1:
        raise InvalidArgumentError(f"sample count must be at least 1, got {count}")
    bounds = impl.validate_bounds(bounds if bounds is not None else impl.default_bounds())
    lo, hi = bounds[0]
    rows = np.zeros((count, impl.descriptor.algebra_dim))
    rows[:, 0] = lo + (hi - lo) * np.arange(count) / count
    return samples_from_coeffs(impl.descriptor, rows, bounds, label="grid")
