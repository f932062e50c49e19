"""Exact computations with partial group actions and related structures."""

__version__ = "0.1.0"
