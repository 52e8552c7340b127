"""Exception and warning types shared across the package."""


class BilembedError(Exception):
    """Base class for all package errors."""


class PreconditionViolation(BilembedError, ValueError):
    """Inputs fall outside the domain where an operation is defined."""


class OnBranchCut(PreconditionViolation):
    """A complex power was requested on its excluded ray."""


class NonConvergent(BilembedError, RuntimeError):
    """A numerical procedure could not meet its tolerance."""


class SizeMismatch(BilembedError, ValueError):
    """Grid functions live on incompatible grids."""


class WrongSide(BilembedError, ValueError):
    """A grid function is on the space side when frequency was needed, or vice versa."""


class DegenerateDenominator(BilembedError, ZeroDivisionError):
    """A ratio was requested whose denominator is numerically zero."""


class AliasRisk(UserWarning):
    """Spectral content is close enough to the Nyquist edge to alias."""
