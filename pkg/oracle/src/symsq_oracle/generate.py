from .generators import main

__all__ = ["main"]
