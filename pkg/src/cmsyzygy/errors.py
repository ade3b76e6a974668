"""Exception hierarchy.

Domain errors describe bad or unsupported input.  Engine errors signal that a
proven equivalence failed to hold numerically, i.e. a bug somewhere upstream.
"""


class CmsyzError(Exception):
    """Base class for every error raised by the package."""


class DomainError(CmsyzError):
    pass


class EngineError(CmsyzError):
    """An internal consistency assertion failed."""


class ParseError(DomainError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CapExceeded(DomainError):
    pass


class NonBinomialConsequence(DomainError):
    pass


class InconclusiveIso(DomainError):
    pass


class MapsNotGiven(DomainError):
    pass


class NotCM(DomainError):
    pass


class NotBoundary(DomainError):
    pass


class Ambiguous(DomainError):
    pass


class NotDimerTree(DomainError):
    pass


class TooSmall(DomainError):
    pass


class InvalidAction(DomainError):
    pass


class SearchSpaceTooLarge(DomainError):
    pass


class CharacteristicDependence(DomainError):
    """A module found over a prime field does not lift to the rationals."""


class DecompositionFailure(DomainError):
    pass


class ConditionMismatch(EngineError):
    pass


class TransferMismatch(EngineError):
    pass


class BijectionFailure(EngineError):
    pass
