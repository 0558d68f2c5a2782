"""Group, model and dataset interfaces package."""
