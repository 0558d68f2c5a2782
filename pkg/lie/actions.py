"""Left actions of group elements on plane points and on images."""
from enum import Enum

import numpy as np

from groups.so2 import rotation_angle
from interfaces.errors import InvalidArgumentError
from interfaces.lie_group import GroupElement

# Angles within this distance of a multiple of π/2 count as quarter turns
QUARTER_TURN_TOL = 1e-9


class ImageActionMethod(Enum):
    """Resampling used when a group element acts on an image."""
    BILINEAR = "bilinear"
    EXACT_C4 = "exact_c4"


def act_points(g: GroupElement, points: np.ndarray) -> np.ndarray:
    """Apply g to an [N x 2] array of points."""
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] != 2:
        raise InvalidArgumentError(f"points must be [N x 2], got {points.shape}")
    moved = points @ g.rotation_block.T
    if g.group.homogeneous:
        moved = moved + g.translation
    return moved


def act_point(g: GroupElement, p) -> np.ndarray:
    """g · p for a single point in R²."""
    p = np.asarray(p, dtype=np.float64)
    if p.shape != (2,) or not np.all(np.isfinite(p)):
        raise InvalidArgumentError(f"point must be a finite 2-vector, got {p!r}")
    return act_points(g, p[None, :])[0]


def quarter_turns(g: GroupElement) -> int:
    """Number k in {0, 1, 2, 3} with g = rotation by k·π/2, else raise."""
    if np.any(g.translation != 0.0):
        raise InvalidArgumentError("element has a translation part, not a quarter turn")
    angle = rotation_angle(g.rotation_block)
    k = round(angle / (np.pi / 2.0))
    if abs(angle - k * np.pi / 2.0) > QUARTER_TURN_TOL:
        raise InvalidArgumentError(f"rotation angle {angle} is not a multiple of π/2")
    return k % 4


def is_quarter_turn(g: GroupElement) -> bool:
    try:
        quarter_turns(g)
    except InvalidArgumentError:
        return False
    return True


def _as_channels(img: np.ndarray) -> np.ndarray:
    img = np.asarray(img, dtype=np.float64)
    if img.ndim == 2:
        return img[:, :, None]
    if img.ndim != 3:
        raise InvalidArgumentError(f"image must be HxW or HxWxC, got shape {img.shape}")
    return img


def _bilinear(img: np.ndarray, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """Sample img at fractional (row, col) positions; outside reads the nearest edge pixel."""
    height, width, channels = img.shape
    r0 = np.floor(rows).astype(np.int64)
    c0 = np.floor(cols).astype(np.int64)
    fr = rows - r0
    fc = cols - c0
    out = np.zeros((rows.size, channels))
    for dr, dc, weight in (
        (0, 0, (1.0 - fr) * (1.0 - fc)),
        (0, 1, (1.0 - fr) * fc),
        (1, 0, fr * (1.0 - fc)),
        (1, 1, fr * fc),
    ):
        r = np.clip(r0 + dr, 0, height - 1)
        c = np.clip(c0 + dc, 0, width - 1)
        out += weight[:, None] * img[r, c]
    return out


def act_image(
    g: GroupElement,
    img: np.ndarray,
    method: ImageActionMethod = ImageActionMethod.BILINEAR,
) -> np.ndarray:
    """(g · img)(p) = img(g⁻¹ · p) about the image center ((H-1)/2, (W-1)/2).

    Pixel (row i, col j) sits at x = j - (W-1)/2, y = i - (H-1)/2. Bilinear
    samples outside the grid take the nearest edge value, so constants stay
    constant. The exact_c4 method is a lossless index permutation and needs a
    square image and a quarter-turn g. The result keeps the input's rank.
    """
    method = ImageActionMethod(method)
    squeeze = np.asarray(img).ndim == 2
    grid = _as_channels(img)
    height, width, _ = grid.shape

    if method is ImageActionMethod.EXACT_C4:
        if height != width:
            raise InvalidArgumentError(f"exact_c4 needs a square image, got {height}x{width}")
        k = quarter_turns(g)
        out = np.ascontiguousarray(np.rot90(grid, k=-k, axes=(0, 1)))
    elif np.array_equal(g.matrix, np.eye(g.group.matrix_dim)):
        out = grid.copy()
    else:
        cy, cx = (height - 1) / 2.0, (width - 1) / 2.0
        rows, cols = np.meshgrid(np.arange(height), np.arange(width), indexing="ij")
        centered = np.stack([cols.ravel() - cx, rows.ravel() - cy], axis=1)
        source = act_points(g.inverse(), centered)
        out = _bilinear(grid, source[:, 1] + cy, source[:, 0] + cx)
        out = out.reshape(height, width, -1)
    return out[:, :, 0] if squeeze else out
