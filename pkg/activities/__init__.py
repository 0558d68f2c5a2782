"""Activities package for Temporal activities."""

__all__ = []