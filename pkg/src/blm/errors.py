"""Exception hierarchy shared by every module."""


class BlmError(Exception):
    """Base class for all errors raised by :mod:`blm`."""


class ArgumentError(BlmError, ValueError):
    """An argument lies outside the domain an operation accepts."""


class DomainError(BlmError, ValueError):
    """A quantity is undefined or infinite at the requested point."""


class PreconditionError(BlmError):
    """A documented precondition of an operation does not hold."""


class ValidationError(BlmError):
    """Construction was rejected; ``report`` holds every check outcome."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class UnsupportedRegimeError(BlmError):
    """The requested parameter regime has no supported representation."""


class OracleError(BlmError):
    """A numerical oracle failed to reach its stated accuracy."""


class SamplerError(BlmError):
    """A sampler could not produce a draw (e.g. root-finder failure)."""

    def __init__(self, message, uniform=None):
        super().__init__(message)
        self.uniform = uniform


class ConsistencyError(BlmError):
    """An internal identity that must hold for valid inputs was violated."""
