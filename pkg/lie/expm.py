"""Matrix exponential by scaling and squaring."""
import numpy as np

from interfaces.errors import InvalidArgumentError

TAYLOR_TERMS = 18
# A is halved until its 1-norm drops below this before the series is applied
SCALING_THRESHOLD = 0.5

_TAYLOR_COEFFS = np.cumprod(np.concatenate(([1.0], 1.0 / np.arange(1, TAYLOR_TERMS + 1))))


def one_norm(A: np.ndarray) -> float:
    """Maximum absolute column sum."""
    return float(np.max(np.sum(np.abs(A), axis=0)))


def exp_matrix(A: np.ndarray) -> np.ndarray:
    """exp(A) = Σ Aᵏ/k! for a square real matrix.

    A is scaled by 2⁻ˢ until ‖A‖₁ < 0.5, the truncated Taylor series is
    evaluated in Horner form, and the result is squared s times.
    """
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidArgumentError(f"exp_matrix needs a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidArgumentError("exp_matrix input has non-finite entries")

    n = A.shape[0]
    norm = one_norm(A)
    squarings = 0
    while norm / 2.0 ** squarings >= SCALING_THRESHOLD:
        squarings += 1
    scaled = A / 2.0 ** squarings

    identity = np.eye(n)
    result = identity * _TAYLOR_COEFFS[TAYLOR_TERMS]
    for k in range(TAYLOR_TERMS - 1, -1, -1):
        result = scaled @ result + identity * _TAYLOR_COEFFS[k]

    for _ in range(squarings):
        result = result @ result
    return result
