"""Exact genus-1 evaluation of Frobenius-algebra skein vectors and RT invariants."""

__version__ = "0.1.0"
