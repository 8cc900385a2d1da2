"""Exact verification toolkit for folded simple Lie algebras."""
from .kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
