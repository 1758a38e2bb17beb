"""Exception hierarchy; each class carries the CLI exit code it maps to."""


class CycweilError(Exception):
    exit_code = 5


class MalformedInputError(CycweilError, ValueError):
    exit_code = 2


class NotSquarefreeError(CycweilError, ValueError):
    exit_code = 3


class CharacteristicDividesDegreeError(CycweilError, ValueError):
    """Raised when p divides the exponent r of y."""

    exit_code = 4


class PrecisionError(CycweilError, ArithmeticError):
    exit_code = 5


class VerificationError(CycweilError):
    exit_code = 5


class OracleMismatchError(CycweilError):
    exit_code = 6


class NonUnitError(ArithmeticError):
    pass
