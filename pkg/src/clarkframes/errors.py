"""Exception types shared across the package."""


class ClarkFramesError(Exception):
    """Base class for all package errors."""


class DomainError(ClarkFramesError, ValueError):
    """A point lies outside the domain of an operation (e.g. ``|z| >= 1``)."""


class InputError(ClarkFramesError, ValueError):
    """Malformed or inconsistent input data."""


class RangeError(ClarkFramesError, IndexError):
    """An index or count is out of the supported range."""


class ResourceError(ClarkFramesError, MemoryError):
    """A request would exceed the configured resource limits."""


class NumericError(ClarkFramesError, ArithmeticError):
    """A numerical procedure failed to produce a certified result."""
