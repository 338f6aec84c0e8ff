"""Exact nearest-neighbor representations of Boolean functions."""

__version__ = "0.1.0"
