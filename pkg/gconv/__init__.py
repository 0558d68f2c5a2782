"""Almost-equivariant Lie algebra convolution layers and models."""
