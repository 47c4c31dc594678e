"""Exception types shared across the package."""


class PPHError(Exception):
    """Base class for all errors raised by this package."""


class UnsortedBreakpoints(PPHError):
    """Breakpoints are not strictly increasing."""


class MonotonicityViolation(PPHError):
    """Step values decrease somewhere."""


class RangeViolation(PPHError):
    """A probability or level parameter lies outside its admissible range."""


class NegativeThreshold(PPHError):
    """A unit-step threshold was negative."""


class EmptyFamily(PPHError):
    """A family operation received no members."""


class NonPositiveTolerance(PPHError):
    """A tolerance parameter must be strictly positive."""


class LengthMismatch(PPHError):
    """Paired lists or sample sets do not have matching lengths."""


class DomainViolation(PPHError):
    """An argument is not in the required function class."""


class InsufficientProbes(PPHError):
    """A checker needs more probe inputs than were supplied."""


class DimensionMismatch(PPHError):
    """A vector does not match the space dimension."""


class UnknownPoint(PPHError):
    """A point label is not part of the carrier."""


class EmptySet(PPHError):
    """A point-set argument must be nonempty."""


class AxiomViolation(PPHError):
    """A space failed one of its defining axioms.

    Attributes:
        axiom: short axiom name, e.g. ``"PM4"``.
        witness: the labels (pair or triple) exhibiting the failure.
    """

    def __init__(self, axiom, witness, message=None):
        self.axiom = axiom
        self.witness = witness
        super().__init__(message or f"{axiom} fails at {witness!r}")


class NotAMetric(PPHError):
    """A distance matrix is not a metric.

    Attributes:
        witness: indices (and values) exhibiting the failure.
    """

    def __init__(self, witness, message=None):
        self.witness = witness
        super().__init__(message or f"not a metric: {witness!r}")


class PreconditionNotMet(PPHError):
    """A hypothesis required by an operation does not hold.

    Attributes:
        level: for chain extraction, the dyadic level that failed (1-based);
            ``None`` when the precondition carries no level.
    """

    def __init__(self, message, level=None):
        self.level = level
        super().__init__(message)
