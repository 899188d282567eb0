"""Cogredient classes and eigenvalue regions of permutative doubly stochastic matrices."""

__version__ = "0.1.0"
