"""Exact reduction and torus-fibre counting for Laurent series at infinity."""

__version__ = "0.1.0"
