"""Exception types shared across the package."""


class PadicMobiusError(Exception):
    """Base class for all domain errors raised by this package."""


class ParseError(PadicMobiusError, ValueError):
    """Malformed textual input (rationals, field elements, maps, points)."""


class UnsupportedExtension(PadicMobiusError):
    """An operation needs a square root outside Q(sqrt(D)) for the active D.

    The tower policy is one quadratic extension per context; anything that
    would require a second independent square root raises this instead of
    approximating.
    """

    def __init__(self, message, needed=None):
        super().__init__(message)
        self.needed = needed


class PrecisionExhausted(PadicMobiusError):
    """Hensel lifting hit the precision cap before settling a valuation."""


class DegenerateConfiguration(PadicMobiusError):
    """Coincident points where distinct ones are required."""


class WrongClass(PadicMobiusError):
    """The map's dynamical class does not admit the requested construction."""


class TypeIPoint(PadicMobiusError):
    """A type-I point was passed where a hyperbolic (type-II) point is needed."""


class NotAllElliptic(PadicMobiusError):
    """A family fails the all-elliptic hypothesis; carries the witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class BudgetExceeded(PadicMobiusError):
    """A word-enumeration or orbit budget was exceeded."""
