"""Implied volatility under the model's bond and zero dividend yield.

The inversion works on the option that is out of the money against the
forward, in log-price space.  That keeps the solve well conditioned both
for tiny prices (short expiry, away from the money) and for calls pinned
against the upper bound S at long expiry, where the information sits in
the put.  Parity makes the two formulations equivalent.
"""

import math
from dataclasses import dataclass

from . import mmm
from .blackscholes import BsContext, bs_log_price, bs_log_vega
from .errors import (DegenerateTargetError, DomainError, NonConvergenceError,
                     OutOfBoundsError)

V_START_HI = 5.0
V_MAX = 5e3
GROWTH = 4.0
PRICE_TOL = 1e-12
STEP_TOL = 1e-12
MAX_ITER = 200
# below this log-price slope Newton is abandoned for bisection
TINY_VEGA = 1e-300


@dataclass(frozen=True)
class IvResult:
    """Solution ``vol`` with the call-price ``residual`` and final ``bracket``."""

    vol: float
    iterations: int
    residual: float
    bracket: tuple


def _residual(fv, ln_target):
    # exp(ln_target + fv) - exp(ln_target) without overflow or cancellation
    if fv == -math.inf:
        return -math.exp(ln_target)
    if fv > 0.0:
        return math.exp(ln_target + fv + math.log(-math.expm1(-fv)))
    if fv == 0.0:
        return 0.0
    return -math.exp(ln_target + math.log(-math.expm1(fv)))


def _initial_guess(xi, ln_norm_price, T):
    # leading small-time behaviour of the normalised out-of-the-money price
    if abs(xi) < 1e-8 or ln_norm_price > -1.0:
        sig = math.sqrt(2.0 * math.pi) * math.exp(min(ln_norm_price, 0.0)) + abs(xi)
    else:
        sig = abs(xi) / math.sqrt(-2.0 * ln_norm_price)
    return sig / math.sqrt(T)


def _solve(S, K, T, bond, kind, ln_target):
    """Root of ln BS_kind(v) = ln_target, increasing in v."""
    base = BsContext(S, K, T, 1.0, 0.0, bond)
    tol_abs = PRICE_TOL * S

    def f(v):
        return bs_log_price(base.with_vol(v), kind) - ln_target

    lo, hi = 0.0, V_START_HI
    f_hi = f(hi)
    iterations = 0
    while f_hi < 0.0:
        lo, hi = hi, hi * GROWTH
        if hi > V_MAX:
            raise NonConvergenceError(
                f"target needs a volatility above v_max = {V_MAX:g}")
        f_hi = f(hi)
        iterations += 1

    v = _initial_guess(base.xi, ln_target - math.log(K * bond), T)
    if not lo < v < hi:
        v = 0.5 * (lo + hi)

    while iterations < MAX_ITER:
        iterations += 1
        fv = f(v)
        res = _residual(fv, ln_target)
        if fv == 0.0:
            lo = hi = v
            break
        if fv < 0.0:
            lo = v
        else:
            hi = v
        # Newton on the log-price: slope = vega / price
        if fv == -math.inf:
            slope = 0.0
        else:
            ln_slope = bs_log_vega(base.with_vol(v)) - (fv + ln_target)
            slope = math.exp(min(ln_slope, 700.0))
        if slope < TINY_VEGA:
            v_new = 0.5 * (lo + hi)
        else:
            v_new = v - fv / slope
            if not lo < v_new < hi:
                v_new = 0.5 * (lo + hi)
        step = abs(v_new - v)
        if abs(res) <= tol_abs and step <= STEP_TOL:
            break
        if v_new == v or hi - lo <= 4.0 * math.ulp(max(hi, 1e-300)):
            break
        v = v_new
    else:
        fv = f(v)
        res = _residual(fv, ln_target)
        if abs(res) > tol_abs:
            raise NonConvergenceError(
                f"no convergence in {MAX_ITER} iterations (residual {res:.3g})")

    fv = f(v)
    res = _residual(fv, ln_target)
    if abs(res) > tol_abs:
        raise NonConvergenceError(f"residual {res:.3g} above tolerance {tol_abs:.3g}")
    return IvResult(vol=v, iterations=iterations, residual=res, bracket=(lo, hi))


def implied_vol(params, K, T, target_price, kind="call"):
    """Volatility v with bs_call_mmm(params, K, T, v) equal to ``target_price``.

    ``kind="put"`` accepts a put price instead.  Targets outside the strict
    no-arbitrage bounds raise ``OutOfBoundsError``; targets exactly on a bound
    raise ``DegenerateTargetError`` (zero or infinite volatility).
    """
    if not K > 0.0 or not T > 0.0:
        raise DomainError("strike and expiry must be positive")
    if kind not in ("call", "put"):
        raise DomainError(f"kind must be 'call' or 'put', got {kind!r}")
    if not math.isfinite(target_price):
        raise DomainError("target price must be finite")
    S = params.S
    bond = mmm.zcb_price(params, T)
    if bond == 1.0:
        raise DegenerateTargetError(f"expiry {T} is degenerate; no time value")
    kz = K * bond
    if kind == "call":
        lower, upper = max(S - kz, 0.0), S
    else:
        lower, upper = max(kz - S, 0.0), kz
    if target_price < lower:
        raise OutOfBoundsError(
            f"{kind} price {target_price!r} is below the lower bound {lower!r}")
    if target_price > upper:
        raise OutOfBoundsError(
            f"{kind} price {target_price!r} is above the upper bound {upper!r}")
    if target_price == lower:
        raise DegenerateTargetError("target equals the lower bound (zero volatility)")
    if target_price == upper:
        raise DegenerateTargetError("target equals the upper bound (infinite volatility)")

    otm_call = kz >= S
    if (kind == "call") == otm_call:
        otm = target_price
    elif kind == "call":
        otm = target_price - S + kz
    else:
        otm = target_price + S - kz
    if not otm > 0.0:
        raise DegenerateTargetError("target is indistinguishable from intrinsic value")
    return _solve(S, K, T, bond, "call" if otm_call else "put", math.log(otm))


def implied_vol_mmm(params, K, T):
    """Implied volatility of the model's own call price at (K, T)."""
    kind, ln_otm = mmm.log_otm_price(params, K, T)
    bond = mmm.zcb_price(params, T)
    if ln_otm == -math.inf:
        raise DegenerateTargetError(
            f"price at K={K}, T={T} equals intrinsic value at double precision")
    cap = math.log(params.S) if kind == "call" else math.log(K) + math.log(bond)
    if ln_otm >= cap:
        raise DegenerateTargetError(f"price at K={K}, T={T} sits on its upper bound")
    return _solve(params.S, K, T, bond, kind, ln_otm)
