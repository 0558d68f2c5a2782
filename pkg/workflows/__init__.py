"""Workflows package for Temporal workflows."""

__all__ = []