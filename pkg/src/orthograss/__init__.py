"""Exact combinatorics of Grassmann and ortho-Grassmann graphs over Q(i)."""

__version__ = "0.1.0"
