"""Gordan's algorithm for binary forms with exact arithmetic."""

__version__ = "0.1.0"
