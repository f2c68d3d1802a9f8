"""Numerical experiments on quasiconformal maps solving the Poisson equation."""
from .errors import ConfigurationError, DomainError, NumericalError
from .grid import DiscGrid, Field, SquareGrid
from .greenpoisson import CircleFn
from .halfplane import LineFn

__all__ = [
    "CircleFn", "ConfigurationError", "DiscGrid", "DomainError", "Field", "LineFn", "NumericalError",
    "SquareGrid",
]
__version__ = "0.1.0"
