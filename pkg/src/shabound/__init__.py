"""Descent invariants and Selmer/rank/Sha bounds for rational p-isogenies (p = 5, 7)."""

__version__ = "0.1.0"
