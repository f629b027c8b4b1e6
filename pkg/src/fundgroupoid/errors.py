"""Exception types shared across the package."""


class FundGroupoidError(Exception):
    """Base class for domain errors."""


class ClearanceError(FundGroupoidError, ValueError):
    """A path comes closer to a puncture than the space's clearance allows."""


class NotClosedError(FundGroupoidError, ValueError):
    pass


class EndpointMismatchError(FundGroupoidError, ValueError):
    """Two paths (or classes) cannot be concatenated: target != source."""


class UndefinedCompositionError(FundGroupoidError, KeyError):
    pass


class UnknownElementError(FundGroupoidError, KeyError):
    pass


class WeakAxiomViolation(FundGroupoidError, ValueError):
    """Input to the inverse derivation does not satisfy the weak axioms."""


class EmptySectorError(FundGroupoidError, ValueError):
    pass


class BudgetExceeded(FundGroupoidError, RuntimeError):
    """An exhaustive computation would exceed its configured size cap."""


class MeshLookupError(FundGroupoidError, KeyError):
    """A table mesh or table weight has no entry for the requested point."""
