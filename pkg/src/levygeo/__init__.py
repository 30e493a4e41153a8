"""Geometry of transition densities of symmetric Levy processes."""

__version__ = "0.1.0"
