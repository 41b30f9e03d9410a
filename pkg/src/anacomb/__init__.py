"""Exact combinatorial counts, generating functions and streaming sketches,
each paired with an independent oracle."""

__version__ = "0.1.0"
