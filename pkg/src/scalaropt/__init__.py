"""Bounded scalar optimization: parse a function, minimize it, find its critical points."""

__version__ = "0.1.0"
