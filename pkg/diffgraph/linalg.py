"""Dense matrix inversion by Gaussian elimination with partial pivoting."""
from typing import Optional, Tuple

import numpy as np

from interfaces.errors import ShapeError, SingularMatrixError

# Pivots smaller than this fraction of their row's largest entry are singular
PIVOT_TOL = 1e-12
MAX_CONDITION = 1e8


def _one_norm(A: np.ndarray) -> float:
    return float(np.max(np.sum(np.abs(A), axis=0)))


def gaussian_inverse(A: np.ndarray, index: Optional[int] = None) -> Tuple[np.ndarray, float]:
    """Inverse of a square matrix and its 1-norm condition estimate ‖A‖₁‖A⁻¹‖₁."""
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ShapeError(f"matrix_inverse needs square matrices, got {A.shape}")
    n = A.shape[0]
    work = np.concatenate([A.copy(), np.eye(n)], axis=1)
    for col in range(n):
        pivot = col + int(np.argmax(np.abs(work[col:, col])))
        if pivot != col:
            work[[col, pivot]] = work[[pivot, col]]
        row_max = np.max(np.abs(work[col, :n]))
        if row_max == 0.0 or abs(work[col, col]) < PIVOT_TOL * row_max:
            raise SingularMatrixError("matrix is singular", condition=np.inf, index=index)
        work[col] = work[col] / work[col, col]
        others = np.arange(n) != col
        work[others] -= np.outer(work[others, col], work[col])
    inverse = work[:, n:]
    condition = _one_norm(A) * _one_norm(inverse)
    if not np.isfinite(condition) or condition >= MAX_CONDITION:
        raise SingularMatrixError("matrix is too badly conditioned", condition=condition, index=index)
    return inverse, condition


def batched_inverse(stack: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Invert an [n x n] matrix or a [B x n x n] stack; errors name the offending index."""
    stack = np.asarray(stack, dtype=np.float64)
    if stack.ndim == 2:
        inverse, condition = gaussian_inverse(stack)
        return inverse, np.array(condition)
    if stack.ndim != 3:
        raise ShapeError(f"matrix_inverse needs [n x n] or [B x n x n], got {stack.shape}")
    inverses = np.empty_like(stack)
    conditions = np.empty(stack.shape[0])
    for i, matrix in enumerate(stack):
        inverses[i], conditions[i] = gaussian_inverse(matrix, index=i)
    return inverses, conditions
