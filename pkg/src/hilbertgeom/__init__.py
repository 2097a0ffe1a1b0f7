"""hilbertgeom - Hilbert metric toolkit for bounded convex planar domains."""

__version__ = "0.1.0"
