"""Exact arithmetic for elliptic surfaces over k(t)."""

__version__ = "0.1.0"
