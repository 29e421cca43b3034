"""Exact SL(2)-equivariant jet bundles on the projective line."""

__version__ = "0.1.0"
