"""Modified Bessel functions and the noncentral chi-square law.

The chi-square distribution is allowed zero degrees of freedom, in which
case it has a point mass ``exp(-x/2)`` at the origin and ``ncx2_pdf`` is the
density of the continuous part only.  Tails are computed by the kernels in
log space, so probabilities far below the double-precision underflow
threshold are still available through the ``*_log_*`` functions.
"""

import math
from dataclasses import dataclass

from scipy import integrate, special

from . import kernels
from .errors import DomainError, NonConvergenceError, RangeOverflowError

_LN2 = math.log(2.0)
_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_MAX_EXP_ARG = 709.78

# adaptive quadrature budget for the oracle, in integrand evaluations
ORACLE_MAX_EVALS = 1_000_000


@dataclass(frozen=True)
class ChiSquareArgs:
    """Evaluation point ``y``, degrees of freedom ``delta``, noncentrality ``x``."""

    y: float
    delta: float
    x: float

    def __post_init__(self):
        for name in ("y", "delta", "x"):
            v = getattr(self, name)
            if math.isnan(v) or v < 0.0:
                raise DomainError(f"{name} must be nonnegative, got {v!r}")
        if math.isinf(self.delta) or math.isinf(self.x):
            raise DomainError("delta and x must be finite")

    @property
    def atom(self):
        """Point mass at the origin (nonzero only for delta = 0)."""
        return math.exp(-0.5 * self.x) if self.delta == 0.0 else 0.0

    @property
    def continuous_mass(self):
        return -math.expm1(-0.5 * self.x) if self.delta == 0.0 else 1.0


def _check_order(nu):
    if nu not in (-1, 0, 1, 2, 3):
        raise DomainError(f"order must be one of -1, 0, 1, 2, 3, got {nu!r}")
    return abs(nu)  # I_{-1} = I_1 for integer order


def bessel_i_scaled(nu, z):
    """exp(-z) * I_nu(z) for nu in {-1, 0, 1, 2, 3} and z >= 0."""
    nu = _check_order(nu)
    if not z >= 0.0:
        raise DomainError(f"z must be nonnegative, got {z!r}")
    if math.isinf(z):
        return 0.0
    return kernels.bessel_i_scaled(nu, float(z))


def bessel_i(nu, z):
    """I_nu(z) for nu in {-1, 0, 1, 2, 3}; raises if the value overflows."""
    nu = _check_order(nu)
    if not z >= 0.0:
        raise DomainError(f"z must be nonnegative, got {z!r}")
    lv = kernels.log_bessel_i_scaled(nu, float(z)) + z
    if lv > _MAX_EXP_ARG:
        raise RangeOverflowError(f"I_{nu}({z}) overflows; use bessel_i_scaled")
    return math.exp(lv)


def _log_ive(nu, z):
    if nu == int(nu) and -1 <= nu <= 3:
        return kernels.log_bessel_i_scaled(abs(int(nu)), z)
    v = special.ive(nu, z)
    return math.log(v) if v > 0.0 else -math.inf


def ncx2_logpdf(args):
    """Log density of the continuous part of the law at ``args.y``."""
    y, d, x = args.y, args.delta, args.x
    half_d = 0.5 * d
    if math.isinf(y):
        return -math.inf
    if x == 0.0:
        # central chi-square; with delta = 0 everything sits in the atom
        if d == 0.0:
            return -math.inf
        if y == 0.0:
            if d < 2.0:
                return math.inf
            return -_LN2 if d == 2.0 else -math.inf
        return ((half_d - 1.0) * math.log(y) - 0.5 * y
                - half_d * _LN2 - math.lgamma(half_d))
    nu = half_d - 1.0
    if y == 0.0:
        # limit of the Bessel series leading term
        if d == 0.0:
            return math.log(x) - 2.0 * _LN2 - 0.5 * x
        if d == 2.0:
            return -_LN2 - 0.5 * x
        return math.inf if d < 2.0 else -math.inf
    z = math.sqrt(x * y)
    gap = (x - y) / (math.sqrt(x) + math.sqrt(y))
    return (-_LN2 + 0.5 * nu * (math.log(y) - math.log(x))
            - 0.5 * gap * gap + _log_ive(nu, z))


def ncx2_pdf(args):
    """p(y; delta, x), the improper density of the continuous part when delta = 0."""
    return math.exp(ncx2_logpdf(args))


def ncx2_log_ccdf(args):
    """ln P(Y > y), accurate however small the tail is."""
    if math.isinf(args.y):
        return -math.inf
    return kernels.log_ncx2_tail(args.y, args.delta, args.x, True)


def ncx2_log_cdf(args, include_atom=True):
    """ln P(Y <= y); ``include_atom=False`` drops the delta = 0 point mass."""
    if math.isinf(args.y):
        return math.log(args.continuous_mass) if not include_atom else 0.0
    low = kernels.log_ncx2_tail(args.y, args.delta, args.x, False)
    if include_atom and args.delta == 0.0:
        a = -0.5 * args.x
        hi, lo = (a, low) if a >= low else (low, a)
        return hi if lo == -math.inf else hi + math.log1p(math.exp(lo - hi))
    return low


def continuous_mean(delta, x):
    """Mean of the continuous part of the law, conditioned on Y > 0."""
    if delta == 0.0:
        mass = -math.expm1(-0.5 * x)
        return 2.0 if mass == 0.0 else x / mass
    return delta + x


def _upper_is_small(args):
    # the tail on the far side of the mean is summed directly
    return args.y >= continuous_mean(args.delta, args.x)


def ncx2_cdf(args):
    """P(Y <= y), including the point mass at 0 when delta = 0."""
    if math.isinf(args.y):
        return 1.0
    if _upper_is_small(args):
        return -math.expm1(ncx2_log_ccdf(args))
    return args.atom + math.exp(ncx2_log_cdf(args, include_atom=False))


def ncx2_ccdf(args):
    """P(Y > y) = 1 - ncx2_cdf, without cancellation in the far tail."""
    if math.isinf(args.y):
        return 0.0
    if _upper_is_small(args):
        return math.exp(ncx2_log_ccdf(args))
    low = math.exp(ncx2_log_cdf(args, include_atom=False))
    return max(args.continuous_mass - low, 0.0)


def _quad(f, a, b, tol, rel):
    limit = ORACLE_MAX_EVALS // 21
    kw = {"epsabs": 0.0, "epsrel": tol} if rel else {"epsabs": tol, "epsrel": 0.0}
    val, err, info = integrate.quad(f, a, b, limit=limit, full_output=1, **kw)[:3]
    bound = tol * abs(val) if rel else tol
    if info["neval"] > ORACLE_MAX_EVALS or (err > bound and err > 4.0 * abs(val) * 2.2e-16):
        raise NonConvergenceError(
            f"quadrature error estimate {err:.3g} exceeds tolerance {tol:.3g}")
    return val


def ncx2_cdf_oracle(args, tol=1e-10):
    """Reference CDF: adaptive quadrature of ``ncx2_pdf`` plus the point mass.

    Independent of the series kernels except through the Bessel function.
    Raises ``NonConvergenceError`` when the error estimate stays above ``tol``.
    """
    if not tol > 0.0:
        raise DomainError("tol must be positive")
    if args.y == 0.0:
        return args.atom
    d, x = args.delta, args.x

    def f(z):
        return ncx2_pdf(ChiSquareArgs(z, d, x))

    mean = d + x
    if math.isinf(args.y):
        body = _quad(f, 0.0, mean, 0.5 * tol, False) + _quad(f, mean, math.inf, 0.5 * tol, False)
    elif 0.0 < mean < args.y:
        body = _quad(f, 0.0, mean, 0.5 * tol, False) + _quad(f, mean, args.y, 0.5 * tol, False)
    else:
        body = _quad(f, 0.0, args.y, tol, False)
    return args.atom + body


def ncx2_ccdf_oracle(args, rtol=1e-8):
    """Reference upper tail by quadrature of the density over (y, inf), relative tolerance."""
    if not rtol > 0.0:
        raise DomainError("rtol must be positive")
    d, x = args.delta, args.x

    def f(z):
        return ncx2_pdf(ChiSquareArgs(z, d, x))

    return _quad(f, args.y, math.inf, rtol, True)


def norm_cdf(d):
    """Standard normal distribution function, via erfc in both tails."""
    return 0.5 * math.erfc(-d / _SQRT2)


def norm_pdf(d):
    return _INV_SQRT_2PI * math.exp(-0.5 * d * d)


def norm_logcdf(d):
    """ln N(d), finite far into the left tail."""
    return float(special.log_ndtr(d))
