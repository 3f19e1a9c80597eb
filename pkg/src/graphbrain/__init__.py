"""Automated conjecturing of bounds on graph invariants."""

__version__ = "0.1.0"
