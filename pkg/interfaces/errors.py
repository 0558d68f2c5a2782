"""Error hierarchy shared by every package."""
from typing import Optional


class LaconvError(Exception):
    """Base class for all library errors."""


class InvalidArgumentError(LaconvError, ValueError):
    """Argument outside the operation's domain."""


class ShapeError(LaconvError, ValueError):
    """Tensor shapes are incompatible for the requested operation."""


class SingularMatrixError(LaconvError, ArithmeticError):
    """Matrix is singular or too badly conditioned to invert."""

    def __init__(self, message: str, condition: float, index: Optional[int] = None):
        self.condition = condition
        self.index = index
        if index is not None:
            message = f"{message} (sample index {index}, condition {condition:.3e})"
        else:
            message = f"{message} (condition {condition:.3e})"
        super().__init__(message)


class NonFiniteError(LaconvError, ArithmeticError):
    """A computation produced NaN or infinite values."""


class BranchCutError(LaconvError, ValueError):
    """Logarithm requested on the branch cut of the closed-form inverse."""


class UnsupportedActionError(LaconvError, ValueError):
    """No group action is defined for a model's input or output space."""


class ConvergenceError(LaconvError, RuntimeError):
    """An iterative procedure did not converge."""

    def __init__(self, message: str, last_gap: float):
        self.last_gap = last_gap
        super().__init__(f"{message} (last gap {last_gap:.3e})")


class PreconditionError(LaconvError, ValueError):
    """An input violates a documented precondition."""


class ConfigError(LaconvError, ValueError):
    """Configuration is invalid or inconsistent."""


class DivergenceError(LaconvError, RuntimeError):
    """Training loss became non-finite."""

    def __init__(self, message: str, epoch: int):
        self.epoch = epoch
        super().__init__(f"{message} (epoch {epoch})")


class FormatError(LaconvError, ValueError):
    """File does not carry the expected magic number or layout."""


class LengthError(LaconvError, ValueError):
    """File is shorter than its header declares."""


class ConsistencyError(LaconvError, ValueError):
    """Two inputs that must agree do not."""


class UsageError(LaconvError):
    """Command-line usage error."""

    def __init__(self, message: str, help_text: str = ""):
        self.help_text = help_text
        super().__init__(message)
