"""Finite-model laboratory for bitopological dynamical systems."""

from btdslab.kernels import BACKEND

__all__ = ["BACKEND"]
__version__ = "0.1.0"
