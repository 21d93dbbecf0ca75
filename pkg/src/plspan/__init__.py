"""Triangulated PL surfaces spanning closed polygons, with exact validation."""

__version__ = "0.1.0"
