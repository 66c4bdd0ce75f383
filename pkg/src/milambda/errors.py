"""Exception hierarchy.

Every error raised by the package derives from :class:`MilambdaError`, which
is itself a ``ValueError`` so callers that already guard numeric input with
``except ValueError`` keep working.
"""


class MilambdaError(ValueError):
    """Base class for all package errors."""


class LengthMismatch(MilambdaError):
    pass


class DegenerateInput(MilambdaError):
    pass


class NonFiniteInput(MilambdaError):
    pass


class ConstantSeries(MilambdaError):
    pass


class SingularDesign(MilambdaError):
    pass


class TooFewPoints(MilambdaError):
    pass


class CountMismatch(MilambdaError):
    pass


class AlreadyCorrected(MilambdaError):
    pass


class PerfectCorrelation(MilambdaError):
    pass


class TooShort(MilambdaError):
    pass


class InvalidProbabilities(MilambdaError):
    pass


class InvalidParameter(MilambdaError):
    pass


class ZeroVariance(MilambdaError):
    pass


class NoDependence(MilambdaError):
    """The raw mutual information is too small for the ratio to mean anything."""


class CalibrationFailure(MilambdaError):
    pass


class ParseError(MilambdaError):
    pass


class ConstantVariable(ConstantSeries, NoDependence):
    """A constant column shares no information with anything."""
