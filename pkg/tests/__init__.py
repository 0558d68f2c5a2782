"""Tests package for unit and integration tests."""

# This package contains pytest-based tests