"""Exception hierarchy shared by every module.

The command line maps these onto exit codes: format problems exit 2,
everything else derived from `PartialityError` exits 1.
"""


class PartialityError(Exception):
    """Base class for all errors raised by the package."""


class FormatError(PartialityError):
    """Input could not be parsed or is structurally malformed."""


class DimensionError(PartialityError):
    """Matrix or vector shapes do not fit the requested operation."""


class PreconditionError(PartialityError):
    """A documented precondition of an operation does not hold."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ConsistencyError(PartialityError):
    """Two routes that must agree gave different answers.

    Raising this always indicates a bug, never bad input.
    """


class UnsupportedError(PartialityError):
    """The request lies outside what the tool can decide exactly."""
