"""Exception hierarchy shared by the library and the command-line front end."""


class TaqrError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 4


class ValidationError(TaqrError, ValueError):
    exit_code = 3


class InvalidDimensionError(ValidationError):
    pass


class DimensionMismatchError(ValidationError):
    pass


class LevelIndexError(ValidationError, IndexError):
    pass


class NotUnitaryError(ValidationError):
    pass


class DisconnectedGraphError(ValidationError):
    pass


class DegenerateEliminationError(ValidationError):
    """Both operands of an elimination step are zero."""


class InvalidInputError(ValidationError):
    pass


class SpecParseError(TaqrError, ValueError):
    """A preset, gate name or file could not be parsed."""

    exit_code = 1


class UnknownGateError(SpecParseError):
    pass


class InternalError(TaqrError, AssertionError):
    exit_code = 4
