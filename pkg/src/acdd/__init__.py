"""Numerical laboratory for attack-defense dynamics on networks."""

__version__ = "0.1.0"
