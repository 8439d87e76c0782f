"""Finite-algebra machinery for stable canonical rules and companion maps."""

__version__ = "0.1.0"
