"""Exception types shared across the package."""


class CoupledRwmError(Exception):
    """Base class for all errors raised by this package."""


class DegeneratePairError(CoupledRwmError):
    """A pair-coupling routine was called with x == y; callers must take the
    sticky branch before asking for pair geometry."""


class DimensionMismatchError(CoupledRwmError):
    """Vector arguments disagree in dimension."""


class DomainError(CoupledRwmError):
    """A scalar argument lies outside the mathematical domain of the routine."""


class RejectionCapError(CoupledRwmError):
    """A rejection-sampling loop exceeded its iteration cap."""


class InversionError(CoupledRwmError):
    """Numerical CDF inversion failed to converge within its budget."""
