"""Rotated glyph classification sets.

Each class is a fixed glyph drawn on a square canvas in coordinates
u, v ∈ [-1, 1] (u right, v down) and kept inside the unit disk so any
rotation about the center stays in frame. No glyph is a rotation of another.
"""
from typing import Callable, List

import numpy as np
import structlog

from config.train_config import AngleLaw
from interfaces.datasets import LabeledImageSet
from interfaces.errors import ConfigError
from interfaces.lie_group import GroupId
from lie.actions import ImageActionMethod, act_image
from lie.algebra import group_element

logger = structlog.get_logger(__name__)

MIN_CLASSES = 2
MAX_CLASSES = 10
MIN_SIZE = 8
SUPERSAMPLE = 4

Glyph = Callable[[np.ndarray, np.ndarray], np.ndarray]


def _box(u, v, u0, u1, v0, v1):
    return (u >= u0) & (u <= u1) & (v >= v0) & (v <= v1)


def _bar(u, v):
    return _box(u, v, -0.15, 0.15, -0.7, 0.7)


def _ell(u, v):
    return _box(u, v, -0.5, -0.2, -0.6, 0.6) | _box(u, v, -0.5, 0.45, 0.3, 0.6)


def _plus(u, v):
    return _box(u, v, -0.15, 0.15, -0.6, 0.6) | _box(u, v, -0.6, 0.6, -0.15, 0.15)


def _tee(u, v):
    return _box(u, v, -0.6, 0.6, -0.6, -0.3) | _box(u, v, -0.15, 0.15, -0.6, 0.6)


def _ring(u, v):
    edge = np.maximum(np.abs(u), np.abs(v))
    return (edge >= 0.35) & (edge <= 0.6)


def _disk(u, v):
    return u ** 2 + v ** 2 <= 0.45 ** 2


def _equals(u, v):
    return _box(u, v, -0.6, 0.6, -0.37, -0.13) | _box(u, v, -0.6, 0.6, 0.13, 0.37)


def _chevron(u, v):
    return (np.abs(v - (np.abs(u) - 0.3)) <= 0.15) & (np.abs(u) <= 0.55)


def _zed(u, v):
    diagonal = (np.abs(u + v) <= 0.2) & (np.abs(u) <= 0.55)
    return _box(u, v, -0.55, 0.55, -0.6, -0.35) | _box(u, v, -0.55, 0.55, 0.35, 0.6) | diagonal


def _cup(u, v):
    return (
        _box(u, v, -0.55, -0.25, -0.6, 0.6)
        | _box(u, v, 0.25, 0.55, -0.6, 0.6)
        | _box(u, v, -0.55, 0.55, 0.35, 0.6)
    )


GLYPHS: List[Glyph] = [_bar, _ell, _plus, _tee, _ring, _disk, _equals, _chevron, _zed, _cup]
GLYPH_NAMES = ["bar", "ell", "plus", "tee", "ring", "disk", "equals", "chevron", "zed", "cup"]


def render_glyph(index: int, size: int) -> np.ndarray:
    """Anti-aliased [size x size] rendering of glyph `index` with values in [0, 1]."""
    if not 0 <= index < len(GLYPHS):
        raise ConfigError(f"no glyph {index}; there are {len(GLYPHS)}")
    half = (size - 1) / 2.0
    offsets = (np.arange(SUPERSAMPLE) + 0.5) / SUPERSAMPLE - 0.5
    pixels = np.arange(size)
    fine = (pixels[:, None] + offsets[None, :]).ravel()
    coords = (fine - half) / (half + 0.5)
    v, u = np.meshgrid(coords, coords, indexing="ij")
    mask = GLYPHS[index](u, v).astype(np.float64)
    return mask.reshape(size, SUPERSAMPLE, size, SUPERSAMPLE).mean(axis=(1, 3))


def synthetic_rotated_patterns(
    n_per_class: int = 100,
    classes: int = 4,
    size: int = 16,
    angle_law: AngleLaw = AngleLaw.UNIFORM,
    seed: int = 0,
) -> LabeledImageSet:
    """n_per_class rotated copies of each of the first `classes` glyphs, class-major.

    The uniform law draws angles from [0, 2π) and resamples bilinearly; the
    c4 law draws quarter turns and permutes pixels exactly.
    """
    if not MIN_CLASSES <= classes <= MAX_CLASSES:
        raise ConfigError(f"classes must be in [{MIN_CLASSES}, {MAX_CLASSES}], got {classes}")
    if size < MIN_SIZE:
        raise ConfigError(f"size must be at least {MIN_SIZE}, got {size}")
    if n_per_class < 1:
        raise ConfigError(f"n_per_class must be positive, got {n_per_class}")
    law = AngleLaw(angle_law)
    method = ImageActionMethod.EXACT_C4 if law is AngleLaw.C4 else ImageActionMethod.BILINEAR
    rng = np.random.default_rng(seed)

    images = np.empty((classes * n_per_class, size, size))
    angles = np.empty(classes * n_per_class)
    for label in range(classes):
        base = render_glyph(label, size)
        for k in range(n_per_class):
            if law is AngleLaw.C4:
                angle = float(rng.integers(0, 4)) * np.pi / 2.0
            else:
                angle = float(rng.uniform(0.0, 2.0 * np.pi))
            i = label * n_per_class + k
            images[i] = np.clip(act_image(group_element(GroupId.SO2, [angle]), base, method), 0.0, 1.0)
            angles[i] = angle
    labels = np.repeat(np.arange(classes), n_per_class)
    logger.debug("synthetic_generated", classes=classes, n_per_class=n_per_class, size=size, law=law.value)
    return LabeledImageSet(images, labels, classes, meta=f"synthetic:{law.value}", angles=angles)
