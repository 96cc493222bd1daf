"""Exact fields-of-values toolkit for finite groups."""

__version__ = "0.1.0"
