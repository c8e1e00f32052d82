"""Exact tools for binary form class groups and isolations of binary lattices."""

__version__ = "0.1.0"
