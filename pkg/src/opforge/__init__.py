"""Exact computations with non-symmetric operads over chain complexes and
truncated simplicial vector spaces."""

__version__ = "0.1.0"
