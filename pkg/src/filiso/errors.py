"""Exception hierarchy shared by all modules."""


class FilisoError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(FilisoError, ValueError):
    pass


class NotPrimeError(FilisoError, ValueError):
    pass


class ValuationError(FilisoError, ValueError):
    pass


class SingularFrobeniusError(FilisoError, ValueError):
    pass


class EigenEquationError(FilisoError, ValueError):
    pass


class RepeatedEigenvalueError(FilisoError, ValueError):
    pass


class NotStableError(FilisoError, ValueError):
    """A subspace or filtration step is not stable under the Frobenius."""


class SplitModelRequired(FilisoError):
    """The operation needs split eigen-data (or a scalar Frobenius)."""


class EnumerationBoundExceeded(FilisoError):
    pass


class PrimeMismatch(FilisoError, ValueError):
    pass


class IntegralWeightsRequired(FilisoError, ValueError):
    """Lattice operations only make sense for integer weights."""


class NotWeaklyAdmissible(FilisoError, ValueError):
    pass


class InvariantViolation(FilisoError, AssertionError):
    """An internal uniqueness or consistency assertion failed (a model bug)."""


class CharacterizationMismatch(FilisoError, AssertionError):
    """Two independent membership tests disagreed on the same filtration."""


class EpsilonTooLarge(FilisoError, ValueError):
    pass
