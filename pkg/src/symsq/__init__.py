"""Numerical closure of the Kuznetsov trace formula and the explicit
formulas for twisted first moments of Maass symmetric-square L-functions."""

from .config import DEFAULT, PrecisionConfig
from .quadrature import Estimate

__all__ = ["DEFAULT", "PrecisionConfig", "Estimate"]
__version__ = "0.1.0"
