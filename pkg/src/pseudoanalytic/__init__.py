"""Generating sets of solutions for first-order systems of mathematical physics."""

from ._backend import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
