"""Finite convex geometries, their resolutions, and small-geometry censuses."""

__version__ = "0.1.0"
FORMAT_VERSION = 1
