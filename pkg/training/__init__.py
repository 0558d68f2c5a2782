"""Optimizers, training loops and grid search."""
