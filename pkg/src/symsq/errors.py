"""Exception hierarchy shared by every module."""


class SymsqError(Exception):
    """Base class for all library errors."""


class DomainError(SymsqError):
    """Argument outside the validity region of a formula."""


class PoleError(SymsqError):
    """Evaluation requested at (or numerically on top of) a pole."""


class PrecisionError(SymsqError):
    """Requested tolerance not reachable (catastrophic cancellation, etc.)."""


class QuadratureError(SymsqError):
    """Quadrature budget exhausted before the error target was met."""


class ResourceError(SymsqError):
    """Computation refused: beyond the configured resource cap."""


class TailError(SymsqError):
    """Truncation-tail bound exceeds the error budget."""


class DataError(SymsqError):
    """Required coefficients or prime support missing from the data."""


class CompletenessError(SymsqError):
    """Test-function mass beyond the dataset completeness cutoff exceeds budget."""


class ConformanceError(SymsqError):
    """Ingested records violate the Hecke identity gate."""

    def __init__(self, message, failing_labels=()):
        super().__init__(message)
        self.failing_labels = list(failing_labels)


class DegenerateError(SymsqError):
    """Calibration target is numerically indistinguishable from zero."""


class NetworkError(SymsqError):
    """Upstream service unreachable after retries."""


class SchemaError(SymsqError):
    """Upstream payload does not match the documented schema."""


def ensure_finite(value, context=""):
    """Reject NaN/inf escaping an operation; returns the value unchanged."""
    import cmath

    z = complex(value)
    if not (cmath.isfinite(z)):
        raise PrecisionError(f"non-finite value {value!r}" + (f" in {context}" if context else ""))
    return value
