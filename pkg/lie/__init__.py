"""Matrix Lie group and algebra operations."""
