"""Exception hierarchy shared by every module."""


class KltError(Exception):
    """Base class for all domain errors raised by kltpairs."""


class InvalidCartan(KltError, ValueError):
    pass


class UnsupportedRank(KltError, ValueError):
    pass


class DimensionMismatch(KltError, ValueError):
    pass


class NotReducedWord(KltError, ValueError):
    pass


class WrongCosetWord(KltError, ValueError):
    """A reduced word whose inversion set is not the expected root set."""


class NotPCharacter(KltError, ValueError):
    pass


class CoefficientOutOfRange(KltError, ValueError):
    pass


class InvalidFan(KltError, ValueError):
    pass


class NonSimplicial(KltError, ValueError):
    pass


class RankCapExceeded(KltError, ValueError):
    pass


class NotQCartier(KltError):
    """The boundary divisor admits no piecewise-linear support function."""

    def __init__(self, cone_id, message=None):
        self.cone_id = cone_id
        super().__init__(message or f"divisor is not Q-Cartier on cone {cone_id}")


class Unsupported(KltError):
    """Input lies outside the configurations the engine handles."""
