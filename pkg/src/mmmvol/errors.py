"""Exception types.

Every error carries a short ``code`` used by the command line front end
when it prints ``ERROR <code>: <message>``.
"""


class MmmError(Exception):
    """Base class for all library errors."""

    code = "error"


class DomainError(MmmError, ValueError):
    """An argument lies outside the domain of the operation."""

    code = "domain"


class RangeOverflowError(MmmError, OverflowError):
    """A result would overflow the floating-point range."""

    code = "overflow"


class DegenerateExpiryError(DomainError):
    """Expiry too close to zero for the transformed coordinates to exist."""

    code = "degenerate-expiry"


class OutOfBoundsError(DomainError):
    """A target price violates the no-arbitrage bounds."""

    code = "out-of-bounds"


class DegenerateTargetError(DomainError):
    """A target price sits exactly on a bound (zero or infinite volatility)."""

    code = "degenerate-target"


class ZeroVolatilityError(DomainError):
    code = "zero-volatility"


class NonConvergenceError(MmmError, ArithmeticError):
    """An iterative method exhausted its budget."""

    code = "no-convergence"


class NonPositiveExcessError(MmmError, ArithmeticError):
    """The call price does not exceed its intrinsic bound at this precision."""

    code = "nonpositive-excess"


class NegativeRadicandError(MmmError, ArithmeticError):
    """The excess is at least one, so the Roper-Rutkowski radicand is negative."""

    code = "negative-radicand"
