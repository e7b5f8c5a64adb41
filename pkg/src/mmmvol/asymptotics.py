"""Small- and large-expiry implied volatility limits.

``small_time_limit`` and ``large_time_limit`` are the closed forms of the
model's implied volatility as T -> 0 and T -> infinity.  ``rr_estimate`` is
the model-free Roper-Rutkowski type estimate built from a single call price,
extended to a dividend yield and a general bond.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from . import mmm
from .errors import DomainError, MmmError, NegativeRadicandError, NonPositiveExcessError
from .implied import implied_vol_mmm

ATM_TOL = 1e-9
_LARGE_COEF = 2.0 * (3.0 - 2.0 * math.sqrt(2.0))


def small_time_limit(params, K):
    """sqrt(alpha) ln(S/K) / (2 (sqrt(S) - sqrt(K))), equal to sqrt(alpha/S) at K = S.

    Evaluated as sqrt(alpha/S) * l / expm1(l) with l = ln(K/S)/2, which is
    continuous through K = S and does not involve the short rate.
    """
    if not K > 0.0 or math.isinf(K):
        raise DomainError(f"strike must be positive and finite, got {K!r}")
    base = math.sqrt(params.alpha / params.S)
    ell = 0.5 * math.log(K / params.S)
    if ell == 0.0:
        return base
    return base * ell / math.expm1(ell)


def large_time_limit(params):
    """sqrt(2 (3 - 2 sqrt 2) (r + eta)), the same for every strike."""
    return math.sqrt(_LARGE_COEF * (params.r + params.eta))


def rr_estimate(S, kappa, bond, call, K, T, log_excess=None, atm_tol=ATM_TOL, forward=False):
    """Finite-expiry Roper-Rutkowski estimate of the implied volatility.

    At the money (|ln(K/S)| <= atm_tol) this is sqrt(2 pi) C / (K sqrt T).
    Otherwise it is |ln(S/K)| / sqrt(-2 T ln(C - (S e^{-kappa T} - K bond)_+)),
    with the logarithm taken from ``log_excess`` when given.  ``forward=True``
    replaces ln(S/K) by the forward log-moneyness ln(S/K) - ln(bond) - kappa T.
    """
    if not (S > 0.0 and K > 0.0 and T > 0.0):
        raise DomainError("S, K and T must be positive")
    if not 0.0 < bond <= 1.0:
        raise DomainError(f"bond must lie in (0, 1], got {bond!r}")
    moneyness = math.log(S / K)
    if abs(moneyness) <= atm_tol:
        if not call >= 0.0:
            raise DomainError("call price must be nonnegative")
        return math.sqrt(2.0 * math.pi) * call / (K * math.sqrt(T))
    if log_excess is None:
        excess = call - max(S * math.exp(-kappa * T) - K * bond, 0.0)
        if not excess > 0.0:
            raise NonPositiveExcessError(
                f"call {call!r} does not exceed its intrinsic value")
        log_excess = math.log(excess)
    if log_excess == -math.inf:
        raise NonPositiveExcessError("excess is zero")
    if log_excess >= 0.0:
        raise NegativeRadicandError(
            f"excess exp({log_excess:.6g}) >= 1; expiry {T} is outside the small-time regime")
    if forward:
        moneyness -= math.log(bond) + kappa * T
    return abs(moneyness) / math.sqrt(-2.0 * T * log_excess)


def rr_estimate_mmm(params, K, T, atm_tol=ATM_TOL, forward=False):
    """rr_estimate for the model's own prices, using the log-space excess off the money."""
    bond = mmm.zcb_price(params, T)
    if abs(math.log(K / params.S)) <= atm_tol:
        return rr_estimate(params.S, 0.0, bond, mmm.call_price(params, K, T), K, T,
                           atm_tol=atm_tol)
    return rr_estimate(params.S, 0.0, bond, math.nan, K, T,
                       log_excess=mmm.log_call_excess(params, K, T),
                       atm_tol=atm_tol, forward=forward)


class ConvergenceRow(NamedTuple):
    """One row of a convergence table; ``iv`` or ``rr`` is None when it failed."""

    T: float
    iv: Optional[float]
    rr: Optional[float]
    regime: str
    status: str


@dataclass
class LimitReport:
    strike: float
    limit_small: float
    limit_large: float
    estimates: list = field(default_factory=list)
    flags: list = field(default_factory=list)

    def errors(self, regime, column="iv"):
        """(T, |value - limit|) for rows of ``regime`` with a value in ``column``."""
        limit = self.limit_small if regime == "small" else self.limit_large
        out = []
        for row in self.estimates:
            val = getattr(row, column)
            if row.regime == regime and val is not None:
                out.append((row.T, abs(val - limit)))
        return out


def _row(params, K, T, regime):
    status = []
    try:
        iv = implied_vol_mmm(params, K, T).vol
    except MmmError as exc:
        iv = None
        status.append(f"iv:{exc.code}")
    rr = None
    if regime == "small":
        try:
            rr = rr_estimate_mmm(params, K, T)
        except MmmError as exc:
            status.append(f"rr:{exc.code}")
    return ConvergenceRow(T, iv, rr, regime, ";".join(status) or "ok")


def _strictly_decreasing(values):
    return all(b < a for a, b in zip(values, values[1:]))


def convergence_report(params, K, T_grid_small, T_grid_large, workers=1):
    """Tabulate implied vol and the RR estimate against both limits.

    Small-expiry rows are listed from the largest T down, large-expiry rows
    from the smallest T up, so errors should shrink down each block.  Rows
    that fail carry an error code instead of aborting the table, and blocks
    whose errors are not strictly decreasing are flagged.
    """
    small = sorted(T_grid_small, reverse=True)
    large = sorted(T_grid_large)
    jobs = [(T, "small") for T in small] + [(T, "large") for T in large]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda j: _row(params, K, *j), jobs))
    else:
        rows = [_row(params, K, *j) for j in jobs]
    report = LimitReport(K, small_time_limit(params, K), large_time_limit(params), rows)
    for regime, column in (("small", "iv"), ("small", "rr"), ("large", "iv")):
        errs = [e for _, e in report.errors(regime, column)]
        if len(errs) > 1 and not _strictly_decreasing(errs):
            report.flags.append(f"{regime}-{column}-not-monotone")
    return report
