"""Black-Scholes prices with a dividend yield and an arbitrary bond price.

Everything is written in the forward log-moneyness
``xi = ln(S/K) - ln(bond) - kappa*T`` and total volatility ``sigma = v sqrt(T)``.
The option that is out of the money against the forward is evaluated
directly (in log space when asked) and the other one through parity, so
deep in-the-money prices never suffer ``1 - 1`` cancellation.
"""

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import erfcx

from .errors import DomainError, ZeroVolatilityError
from .mmm import zcb_price
from .specfun import norm_cdf, norm_logcdf, norm_pdf

_LN_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_SQRT_HALF_PI = math.sqrt(0.5 * math.pi)
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


@dataclass(frozen=True)
class BsContext:
    """Inputs of one Black-Scholes evaluation; ``bond`` is Z(T) in (0, 1]."""

    S: float
    K: float
    T: float
    v: float
    kappa: float = 0.0
    bond: float = 1.0

    def __post_init__(self):
        if not (self.S > 0.0 and self.K > 0.0 and self.T > 0.0):
            raise DomainError("S, K and T must be positive")
        if not self.v >= 0.0:
            raise DomainError(f"volatility must be nonnegative, got {self.v!r}")
        if not 0.0 < self.bond <= 1.0:
            raise DomainError(f"bond must lie in (0, 1], got {self.bond!r}")

    @property
    def forward_spot(self):
        """S exp(-kappa T)."""
        return self.S * math.exp(-self.kappa * self.T)

    @property
    def xi(self):
        """Forward log-moneyness ln(S/K) - ln(bond) - kappa T."""
        return math.log(self.S / self.K) - math.log(self.bond) - self.kappa * self.T

    def with_vol(self, v):
        return replace(self, v=v)


def bs_d1_d2(ctx):
    """(d1, d2); raises ``ZeroVolatilityError`` for v = 0."""
    if ctx.v == 0.0:
        raise ZeroVolatilityError("d1 and d2 are undefined at zero volatility")
    sig = ctx.v * math.sqrt(ctx.T)
    d1 = ctx.xi / sig + 0.5 * sig
    return d1, d1 - sig


def _log_sub(a, b):
    if b == -math.inf:
        return a
    if b >= a:
        return -math.inf
    return a + math.log1p(-math.exp(b - a))


def _mills(u):
    """Mills ratio N(-u) / n(u)."""
    return _SQRT_HALF_PI * float(erfcx(u / math.sqrt(2.0)))


def _mills_slope(u):
    """1 - u R(u) = -R'(u), free of cancellation for large u."""
    if u < 5.0:
        return 1.0 - u * _mills(u)
    # R = 1/(u + t) with t = 1/(u + 2/(u + 3/(u + ...))), so 1 - u R = R t
    t = 0.0
    for k in range(200 if u < 20.0 else 40, 1, -1):
        t = k / (u + t)
    return _mills(u) / (u + t)


def _mills_gap(a, b):
    """R(a) - R(b) for 1 <= a < b."""
    if b - a > 0.1 * a:
        return _mills(a) - _mills(b)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return half * math.fsum(w * _mills_slope(mid + half * z)
                            for z, w in zip(_GL_NODES, _GL_WEIGHTS))


def bs_log_price(ctx, kind):
    """ln of the call or put price, finite far below the underflow threshold.

    Accurate for the option that is out of the money against the forward;
    the in-the-money one is better obtained through ``bs_call``/``bs_put``.
    """
    ln_kb = math.log(ctx.K) + math.log(ctx.bond)
    xi = ctx.xi
    if ctx.v == 0.0 or math.isinf(ctx.v):
        return math.log(_limit_price(ctx, kind)) if _limit_price(ctx, kind) > 0.0 else -math.inf
    d1, d2 = bs_d1_d2(ctx)
    # deep out of the money both terms share the factor n(d2); the remaining
    # Mills-ratio gap keeps the price when the plain difference cancels
    ln_n2 = -0.5 * d2 * d2 - _LN_SQRT_2PI
    if kind == "call":
        if d1 < -1.0:
            return ln_kb + ln_n2 + math.log(_mills_gap(-d1, -d2))
        return ln_kb + _log_sub(xi + norm_logcdf(d1), norm_logcdf(d2))
    if kind == "put":
        if d2 > 1.0:
            return ln_kb + ln_n2 + math.log(_mills_gap(d2, d1))
        return ln_kb + _log_sub(norm_logcdf(-d2), xi + norm_logcdf(-d1))
    raise DomainError(f"kind must be 'call' or 'put', got {kind!r}")


def bs_log_vega(ctx):
    """ln(dC/dv), shared by calls and puts."""
    d1, _ = bs_d1_d2(ctx)
    return (math.log(ctx.K) + math.log(ctx.bond) + ctx.xi
            - 0.5 * d1 * d1 - _LN_SQRT_2PI + 0.5 * math.log(ctx.T))


def _limit_price(ctx, kind):
    fwd, kb = ctx.forward_spot, ctx.K * ctx.bond
    if ctx.v == 0.0:
        return max(fwd - kb, 0.0) if kind == "call" else max(kb - fwd, 0.0)
    return fwd if kind == "call" else kb


def _call_put(ctx):
    fwd, kb = ctx.forward_spot, ctx.K * ctx.bond
    if ctx.v == 0.0 or math.isinf(ctx.v):
        return _limit_price(ctx, "call"), _limit_price(ctx, "put")
    if ctx.xi <= 0.0:
        call = min(math.exp(bs_log_price(ctx, "call")), fwd)
        put = min(max(call + kb - fwd, kb - fwd, 0.0), kb)
    else:
        put = min(math.exp(bs_log_price(ctx, "put")), kb)
        call = min(max(put + fwd - kb, fwd - kb, 0.0), fwd)
    return call, put


def bs_call(ctx):
    """S e^{-kappa T} N(d1) - K bond N(d2), with the v = 0 and v = inf limits."""
    return _call_put(ctx)[0]


def bs_put(ctx):
    return _call_put(ctx)[1]


def bs_vega(ctx):
    """dC/dv = S e^{-kappa T} n(d1) sqrt(T)."""
    d1, _ = bs_d1_d2(ctx)
    return ctx.forward_spot * norm_pdf(d1) * math.sqrt(ctx.T)


def mmm_context(params, K, T, v):
    """Black-Scholes inputs matching the model: no dividend, bond = Z(T)."""
    return BsContext(params.S, K, T, v, 0.0, zcb_price(params, T))


def bs_call_mmm(params, K, T, v):
    """S N(d1) - K exp(-r_hat T) N(d2) with r_hat the model's yield to maturity."""
    return bs_call(mmm_context(params, K, T, v))


def bs_call_direct(ctx):
    """Textbook evaluation of the call; kept for cross-checks."""
    d1, d2 = bs_d1_d2(ctx)
    return ctx.forward_spot * norm_cdf(d1) - ctx.K * ctx.bond * norm_cdf(d2)
