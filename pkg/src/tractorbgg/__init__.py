"""Exact BGG machinery and prolongation connections for |1|-graded geometries."""

__version__ = "0.1.0"
