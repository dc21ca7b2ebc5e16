"""Typed errors. ValidationError maps to CLI exit 1, DataError to exit 2."""


class PastaError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(PastaError):
    """Bad configuration or arguments supplied by the caller."""


class DataError(PastaError):
    """Input data violates a contract (malformed file, degenerate content)."""


# -- pitch ------------------------------------------------------------------

class MalformedRow(DataError):
    pass


class NonUniformStep(DataError):
    pass


class EmptyContour(DataError):
    pass


class NoVoicedFrames(DataError):
    pass


class ZeroMean(ValidationError):
    pass


class InvalidFactor(ValidationError):
    pass


# -- momel ------------------------------------------------------------------

class TooFewVoicedFrames(DataError):
    pass


class NoAnchorsFound(DataError):
    pass


class EmptyInterval(ValidationError):
    pass


# -- alignment --------------------------------------------------------------

class ParseError(DataError):
    pass


class OverlappingWords(DataError):
    pass


class EmptyAlignment(DataError):
    pass


# -- patterns ---------------------------------------------------------------

class TimeBaseMismatch(DataError):
    pass


# -- clustering -------------------------------------------------------------

class EmptyInput(ValidationError):
    pass


class KTooLarge(ValidationError):
    pass


class EmptyMatrix(DataError):
    pass


class LengthMismatch(ValidationError):
    pass


# -- intsint ----------------------------------------------------------------

class FirstMarkRelative(ValidationError):
    pass


class UnorderedMarks(ValidationError):
    pass


class MissingStress(DataError):
    pass


# -- pipeline ---------------------------------------------------------------

class AllUtterancesSkipped(DataError):
    pass


class ModelMismatch(ValidationError):
    pass


class IdMismatch(DataError):
    pass
