"""Exact classical groups over commutative rings: elementary factorizations and certificates."""

__version__ = "0.1.0"
