"""Exception hierarchy.

Every library error derives from :class:`RepetendError`; the CLI maps these to
exit status 2 and anything else to exit status 1.
"""

from __future__ import annotations


class RepetendError(ValueError):
    """Base class for validation and constraint errors raised by the library."""


class ParseError(RepetendError):
    def __init__(self, message: str, text: str = "", pos: int | None = None):
        self.text = text
        self.pos = pos
        if pos is not None and text:
            message = f"{message} at position {pos}:\n  {text}\n  {' ' * pos}^"
        super().__init__(message)


# realfield
class NotSquarefree(RepetendError):
    pass


class NoRealRootInInterval(RepetendError):
    pass


class AmbiguousInterval(RepetendError):
    pass


class Reducible(RepetendError):
    pass


class FieldMismatch(RepetendError):
    pass


class DivisionByZero(RepetendError, ZeroDivisionError):
    pass


class NonpositiveDenominator(RepetendError):
    pass


# linalg
class IndexOutOfRange(RepetendError):
    pass


class EqualIndices(RepetendError):
    pass


class SingularMatrix(RepetendError):
    pass


class NegativeEntry(RepetendError):
    pass


class NonIntegerEntry(RepetendError):
    pass


class DimensionMismatch(RepetendError):
    pass


# multmatrix
class BasisMismatch(RepetendError):
    pass


class NotABasis(RepetendError):
    pass


class NotAMultiplicationMatrix(RepetendError):
    pass


class DegenerateEigenvalue(RepetendError):
    pass


class DegenerateGamma(RepetendError):
    pass


class SingularPivot(RepetendError):
    pass


class ZeroB3(RepetendError):
    pass


# algorithms / expansion
class WrongDimension(RepetendError):
    pass


class NonpositiveInput(RepetendError):
    pass


class NotPeriodic(RepetendError):
    pass


# candidates
class NotAUnit(RepetendError):
    pass


class WrongUnitCount(RepetendError):
    pass


class EvenDegree(RepetendError):
    pass


class ConstraintViolated(RepetendError):
    pass


class InvalidM(RepetendError):
    pass
