"""Lifting layers: base-space signals to functions on the algebra samples.

Both liftings go through the same path. Inputs are first turned into a plain
feature array [.. x N x P x F] (N samples, P patches, F features per patch),
then a shared affine map, relu and a mean over the P axis produce [.. x N x c].
"""
from typing import List, Optional

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from diffgraph import ops
from diffgraph.node import GraphNode, constant
from gconv.init import linear_parameters
from interfaces.errors import InvalidArgumentError
from interfaces.lie_group import AlgebraSampleSet
from lie.actions import ImageActionMethod, act_image
from lie.algebra import exp_algebra


class LiftingKernel:
    """Affine map shared by every sample and patch."""

    def __init__(self, n_features: int, out_channels: int, rng: Optional[np.random.Generator] = None):
        rng = rng if rng is not None else np.random.default_rng(0)
        self.n_features = n_features
        self.out_channels = out_channels
        self.weight, self.bias = linear_parameters(rng, n_features, out_channels)

    def parameters(self) -> List[GraphNode]:
        return [self.weight, self.bias]

    @property
    def parameter_count(self) -> int:
        return self.out_channels * (self.n_features + 1)


class SpatialKernel(LiftingKernel):
    """k x k convolution over C image channels."""

    def __init__(self, kernel_size: int, in_channels: int, out_channels: int,
                 rng: Optional[np.random.Generator] = None):
        if kernel_size < 1 or in_channels < 1:
            raise InvalidArgumentError("kernel size and image channels must be positive")
        self.kernel_size = kernel_size
        self.in_channels = in_channels
        super().__init__(kernel_size * kernel_size * in_channels, out_channels, rng)


class ScalarEmbedding(LiftingKernel):
    """Embeds (t / time_scale, coeffs(xᵢ))."""

    def __init__(self, algebra_dim: int, out_channels: int, time_scale: float = 1.0,
                 rng: Optional[np.random.Generator] = None):
        if time_scale <= 0:
            raise InvalidArgumentError(f"time_scale must be positive, got {time_scale}")
        self.time_scale = float(time_scale)
        super().__init__(1 + algebra_dim, out_channels, rng)


def image_patches(img: np.ndarray, kernel_size: int) -> np.ndarray:
    """im2col of an H x W x C grid: [(H-k+1)(W-k+1) x k·k·C], valid positions only."""
    height, width, channels = img.shape
    if kernel_size > min(height, width):
        raise InvalidArgumentError(f"kernel size {kernel_size} exceeds image {height}x{width}")
    windows = sliding_window_view(img, (kernel_size, kernel_size), axis=(0, 1))
    return windows.transpose(0, 1, 3, 4, 2).reshape(-1, kernel_size * kernel_size * channels)


def image_features(
    images: np.ndarray,
    samples: AlgebraSampleSet,
    kernel: SpatialKernel,
    method: ImageActionMethod = ImageActionMethod.BILINEAR,
) -> np.ndarray:
    """[B x N x P x F] patches of act_image(exp(xᵢ)⁻¹, img) for each image."""
    images = np.asarray(images, dtype=np.float64)
    if images.ndim == 3:
        images = images[..., None]
    if images.ndim != 4 or images.shape[-1] != kernel.in_channels:
        raise InvalidArgumentError(
            f"expected [B x H x W x {kernel.in_channels}] images, got {images.shape}"
        )
    inverses = [exp_algebra(x).inverse() for x in samples.samples]
    return np.stack([
        np.stack([image_patches(act_image(g, img, method), kernel.kernel_size) for g in inverses])
        for img in images
    ])


def scalar_features(times, samples: AlgebraSampleSet, embed: ScalarEmbedding) -> np.ndarray:
    """[B x N x 1 x (1 + algebra_dim)] rows concat(t / time_scale, coeffs(xᵢ))."""
    times = np.atleast_1d(np.asarray(times, dtype=np.float64))
    if times.ndim != 1 or not np.all(np.isfinite(times)):
        raise InvalidArgumentError("times must be a finite 1-D array")
    coeffs = samples.coeff_matrix
    scaled = np.broadcast_to((times / embed.time_scale)[:, None, None], (times.size, len(coeffs), 1))
    tiled = np.broadcast_to(coeffs[None], (times.size,) + coeffs.shape)
    return np.concatenate([scaled, tiled], axis=-1)[:, :, None, :]


def lift_features(features, kernel: LiftingKernel) -> GraphNode:
    """relu(affine) per patch, then the mean over patches."""
    features = np.asarray(features, dtype=np.float64)
    if features.shape[-1] != kernel.n_features:
        raise InvalidArgumentError(
            f"lifting expects {kernel.n_features} features, got {features.shape[-1]}"
        )
    lead = features.shape[:-1]
    flat = constant(features.reshape(-1, kernel.n_features))
    hidden = ops.relu(ops.affine(flat, kernel.weight, kernel.bias))
    hidden = ops.reshape(hidden, lead + (kernel.out_channels,))
    return ops.mean(hidden, axis=len(lead) - 1)


def lift_image(
    img: np.ndarray,
    samples: AlgebraSampleSet,
    spatial_kernel: SpatialKernel,
    method: ImageActionMethod = ImageActionMethod.BILINEAR,
) -> GraphNode:
    """H x W (x C) image to [N x c], or a batch [B x H x W (x C)] to [B x N x c].

    Rows follow the sample order. With one image channel a 3-D array is a batch.
    """
    img = np.asarray(img, dtype=np.float64)
    single = img.ndim == 2 or (img.ndim == 3 and spatial_kernel.in_channels > 1
                               and img.shape[-1] == spatial_kernel.in_channels)
    batch = img[None] if single else img
    lifted = lift_features(image_features(batch, samples, spatial_kernel, method), spatial_kernel)
    if single:
        return ops.reshape(lifted, lifted.shape[1:])
    return lifted


def lift_scalar_time(t, samples: AlgebraSampleSet, embed: ScalarEmbedding) -> GraphNode:
    """Time t to [N x c], or times [B] to [B x N x c]; row i is relu(affine(concat(t, coeffs(xᵢ))))."""
    single = np.ndim(t) == 0
    lifted = lift_features(scalar_features(t, samples, embed), embed)
    if single:
        return ops.reshape(lifted, lifted.shape[1:])
    return lifted
