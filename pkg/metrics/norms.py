"""Matrix norms for bound reporting."""
from enum import Enum

import numpy as np

POWER_ITERATIONS = 50


class MatrixNorm(Enum):
    SPECTRAL = "spectral"
    FROBENIUS = "frobenius"


def spectral_norm_power(A: np.ndarray, iterations: int = POWER_ITERATIONS, seed: int = 0) -> float:
    """Largest singular value estimated by power iteration on AᵀA."""
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    v = np.random.default_rng(seed).standard_normal(A.shape[1])
    v /= np.linalg.norm(v)
    for _ in range(iterations):
        w = A.T @ (A @ v)
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        v = w / norm
    return float(np.linalg.norm(A @ v))


def matrix_norm(A: np.ndarray, kind: MatrixNorm = MatrixNorm.SPECTRAL) -> float:
    if MatrixNorm(kind) is MatrixNorm.FROBENIUS:
        return float(np.linalg.norm(np.asarray(A, dtype=np.float64)))
    return spectral_norm_power(A)
