"""Precision contract passed through every numerical operation."""

from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class PrecisionConfig:
    target_rel_tol: float = 1e-10
    max_series_terms: int = 10**6
    quadrature_abs_floor: float = 1e-16

    def __post_init__(self):
        if not (0.0 < self.target_rel_tol < 1.0):
            raise DomainError(f"target_rel_tol must be in (0,1), got {self.target_rel_tol}")
        if self.max_series_terms < 64:
            raise DomainError(f"max_series_terms must be >= 64, got {self.max_series_terms}")
        if self.quadrature_abs_floor <= 0:
            raise DomainError("quadrature_abs_floor must be positive")


DEFAULT = PrecisionConfig()
