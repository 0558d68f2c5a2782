"""Matrix Lie group implementations package."""
