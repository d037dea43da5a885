"""Exception taxonomy shared across the package.

Validation-type failures (bad user input, unknown group, excluded domain)
map to CLI exit code 2; numeric/internal failures map to exit code 1.
"""


class QTorsionError(Exception):
    """Base class for all package errors."""


class ConfigurationError(QTorsionError, ValueError):
    """Unknown Cartan type or malformed configuration input."""


class DomainError(QTorsionError, ValueError):
    """Input outside the mathematical domain of an operation."""


class ResourceError(QTorsionError, RuntimeError):
    """A configured size bound (Weyl-group order, model dimension) was exceeded."""


class NumericError(QTorsionError, RuntimeError):
    """A precision target could not be met within the iteration budget."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class ConsistencyError(QTorsionError, RuntimeError):
    """An internal structural invariant failed; signals a bug, fail loudly."""
