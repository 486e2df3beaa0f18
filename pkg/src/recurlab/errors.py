"""Exception types shared across the package."""


class RecurlabError(Exception):
    """Base class for all package-specific errors."""


class RangeError(RecurlabError, ValueError):
    """A coordinate or argument lies outside its documented range."""


class SizeCapError(RecurlabError):
    """An enumeration would exceed the configured cap."""

    def __init__(self, required: int, cap: int):
        super().__init__(
            f"enumeration of {required} points exceeds the cap of {cap}"
        )
        self.required = required
        self.cap = cap


class CertificationError(RecurlabError):
    """An operation needs a certified input set, or failed to certify its output."""


class DimensionError(RecurlabError, ValueError):
    """A point set or map has the wrong dimension for the requested operation."""


class ShapeError(RecurlabError, ValueError):
    """A matrix is not square or carries out-of-range entries."""


class StructureError(RecurlabError):
    """Input violates a structural precondition (pattern shape, unipotency, ...)."""


class ConsistencyError(RecurlabError):
    """Two computations that must agree did not."""


class DomainError(RecurlabError, ValueError):
    """Numeric argument outside the mathematical domain of a formula."""
