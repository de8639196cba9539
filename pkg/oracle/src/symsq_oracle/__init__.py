"""Independent golden-vector oracle for the symsq primary package."""

from .generators import GENERATORS, GENERATOR_VERSION, generate_all

__all__ = ["GENERATORS", "GENERATOR_VERSION", "generate_all"]
