"""Minimal reverse-mode differentiation over dense float64 tensors."""
