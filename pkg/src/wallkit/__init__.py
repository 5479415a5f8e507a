"""Exact combinatorics of walls, connected products and colouring complexes."""

__version__ = "0.1.0"
