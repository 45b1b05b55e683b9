"""Exact computational invariant theory for Laplacian polynomial algebras."""

__version__ = "0.1.0"
