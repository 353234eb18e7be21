"""Exact construction and verification of conformally invariant (bi)linear operators on tensor densities."""
__version__ = "0.1.0"
