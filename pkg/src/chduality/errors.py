"""Exception types shared across the package."""

from __future__ import annotations


class ChDualityError(Exception):
    """Base class; ``code`` is the stable identifier used in JSON reports."""

    code = "Error"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)


class RingMismatch(ChDualityError, ValueError):
    code = "RingMismatch"


class ParseError(ChDualityError, ValueError):
    code = "ParseError"

    def __init__(self, message: str = "", line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NotHomogeneous(ChDualityError):
    code = "NotHomogeneous"


class NotNilpotentModI(ChDualityError):
    code = "NotNilpotentModI"


class PowerCapExceeded(ChDualityError):
    code = "PowerCapExceeded"


class InvalidComplex(ChDualityError):
    code = "InvalidComplex"


class MissingDeclaration(ChDualityError):
    code = "MissingDeclaration"


class NotCompleteIntersection(ChDualityError):
    code = "NotCompleteIntersection"


class OutOfRange(ChDualityError):
    code = "OutOfRange"


class NotArtinian(ChDualityError):
    code = "NotArtinian"


class DegenerateInput(ChDualityError):
    code = "DegenerateInput"


class GenericityExhausted(ChDualityError):
    code = "GenericityExhausted"


class NotCM(ChDualityError):
    code = "NotCM"


class SingularLocusNotCI(ChDualityError):
    code = "SingularLocusNotCI"


class CodimOutOfRange(ChDualityError):
    code = "CodimOutOfRange"


class ConditionNotMet(ChDualityError):
    code = "ConditionNotMet"


class WitnessUnavailable(ChDualityError):
    code = "WitnessUnavailable"
