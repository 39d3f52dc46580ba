"""Conjugate approximation experiments driven by the geometry of numbers."""

__version__ = "0.1.0"
