"""Exception hierarchy."""


class AbringError(Exception):
    """Base class for all package errors."""


class InvalidParameter(AbringError, ValueError):
    pass


class DegenerateDivision(AbringError, ArithmeticError):
    """Generic transfer-matrix formula divides by a vanishing prefactor
    at a point that is not classified as singular."""


class DivisionByZero(AbringError, ZeroDivisionError):
    pass


class SingularTransmission(AbringError, ArithmeticError):
    """The shared amplitude denominator vanishes (lasing pole)."""


class SingularSystem(AbringError, ArithmeticError):
    """The direct lattice solve is numerically rank deficient."""


class SingularConstruction(AbringError, ArithmeticError):
    """Bethe-state construction attempted with chi too close to zero."""


class InvalidCriticalPoint(AbringError, ValueError):
    pass
