"""Exception types shared across the package."""

from __future__ import annotations


class BoltcertError(Exception):
    """Base class for all errors raised by this package."""


class SpaceValidationError(BoltcertError):
    """A space, function, or algebra element failed structural validation.

    ``index`` points at the offending entry when one can be named.
    """

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class BoltValidationError(BoltcertError):
    """A point sequence is not a valid bolt.

    ``position`` is the 0-based index of the link (or point) that failed;
    ``condition`` names the violated requirement.
    """

    def __init__(self, message: str, position: int, condition: str):
        super().__init__(message)
        self.position = position
        self.condition = condition


class MeasureWalkError(BoltcertError):
    """The support walk of a dual measure could not continue.

    Raised by bolt extraction when a class fiber carries net mass of a single
    sign, i.e. the measure is not a valid optimality certificate.
    """

    def __init__(self, message: str, point: int, side: str):
        super().__init__(message)
        self.point = point
        self.side = side


class SolverInternalError(BoltcertError):
    """The solver reached a state that should be impossible on valid input."""


class InputFormatError(BoltcertError):
    """A problem file or CLI input is malformed.

    ``field`` names the missing or offending entry for diagnostics.
    """

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field
