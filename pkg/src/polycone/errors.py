"""Exception hierarchy. Verdict-style failures carry a witness payload."""


class PolyconeError(Exception):
    """Base class for all library errors."""


class MixedSpaces(PolyconeError):
    """Two points passed to a metric query live in different spaces."""


class NonPositiveScale(PolyconeError):
    pass


class NegativeScale(PolyconeError):
    pass


class LinkDiameterExceeded(PolyconeError):
    pass


class EquatorTooLarge(PolyconeError):
    pass


class PointOutsideCert(PolyconeError):
    pass


class ComplexFormatError(PolyconeError):
    """Located parse/validation error for complex description files."""

    def __init__(self, message, where=None):
        super().__init__(message if where is None else f"{where}: {message}")
        self.where = where


class WitnessedError(PolyconeError):
    """Mathematical verdict failure; `witness` documents the offending data."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotConic(WitnessedError):
    pass


class NotLocallyConic(WitnessedError):
    pass


class NotSplittable(WitnessedError):
    pass


class NoFixedPointInOverlap(WitnessedError):
    pass


class ProjectionNotPoint(WitnessedError):
    pass


class FiberOffset(WitnessedError):
    pass


class NotCovered(WitnessedError):
    pass


class OrderingViolation(WitnessedError):
    pass


class IsometryFailure(WitnessedError):
    pass


class NonConvexIntersection(WitnessedError):
    pass


class RefinementFailure(WitnessedError):
    pass


class StalledAscent(WitnessedError):
    pass


class UnknownExample(PolyconeError):
    pass
