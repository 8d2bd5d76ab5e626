"""Exact E8 adjoint-group computations and W(E8) Galois certificates."""

__version__ = "0.1.0"
