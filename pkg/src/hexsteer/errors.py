"""Exception types raised by hexsteer."""


class HexsteerError(Exception):
    """Base class for all library errors."""


class InvalidParameterError(HexsteerError, ValueError):
    """A coupling strength, time, mode index or partition is out of range."""


class NumericalError(HexsteerError, ArithmeticError):
    """An eigensolver or factorization result failed its residual check."""


class PhysicalityError(HexsteerError, ValueError):
    """A covariance block that must be positive definite is not."""


class AmbiguousThresholdError(HexsteerError, ValueError):
    """The scanned predicate changes value zero times or more than once.

    ``brackets`` lists every ``(lo, hi)`` interval of the pre-scan grid on
    which a change was seen.
    """

    def __init__(self, message, brackets=()):
        super().__init__(message)
        self.brackets = list(brackets)
