"""Exception types shared across the package."""


class NumradError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(NumradError):
    """Operands have incompatible dimensions."""


class NonFiniteEntry(NumradError):
    """A matrix or vector entry is NaN or infinite."""


class NotSquare(NumradError):
    """Parsed matrix data is not square."""


class NotHermitian(NumradError):
    """Matrix deviates from Hermitian symmetry beyond tolerance."""


class NoConvergence(NumradError):
    """An iterative solver exhausted its iteration budget."""


class InvalidTolerance(NumradError):
    """A tolerance argument is not strictly positive."""


class ZeroVector(NumradError):
    """A nonzero vector is required."""


class NotUnit(NumradError):
    """A unit-norm vector is required."""


class TooFewVectors(NumradError):
    """At least two vectors are required."""


class InvalidOrder(NumradError):
    """The power order n must be an integer >= 2."""


class NotNilpotent(NumradError):
    """The matrix has no nilpotency index >= 2."""


class NormExceedsOne(NumradError):
    """Operator norm must be <= 1 for this check."""


class UnknownKind(NumradError):
    """Unrecognized random-matrix ensemble kind."""


class ParseError(NumradError):
    """Malformed matrix input.

    Carries optional line/column context for diagnostics.
    """

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {col})" if col is not None else ")")
        super().__init__(message + where)
