"""Closed-form prices under the Minimal Market Model.

With the time transform ``phi(T) = alpha/(4 eta) (exp(eta T) - 1)`` and the
coordinates ``x = S/phi`` and ``y = K exp(-rT)/phi``, the benchmarked call is

    C = S * Q(y; 4, x) - K exp(-rT) * Q(y; 0, x)

where ``Q`` is the noncentral chi-square upper tail.  The zero-coupon bond is
``exp(-rT) (1 - exp(-x/2))`` and puts follow by parity.

Prices are assembled from log-space tails.  The option that is out of the
money relative to the forward ``S/Z`` is summed directly and the other one
comes from parity, so both keep their accuracy when they are small.
"""

import math
from dataclasses import asdict, dataclass

from . import kernels
from .errors import DegenerateExpiryError, DomainError, NonPositiveExcessError
from .specfun import ChiSquareArgs, continuous_mean, ncx2_ccdf, ncx2_pdf

T_EPS = 1e-12
ETA_T_MAX = 650.0
ATM_REL_TOL = 1e-9


@dataclass(frozen=True)
class ModelParams:
    """Index level ``S``, short rate ``r``, scale ``alpha`` and net growth rate ``eta``."""

    S: float
    r: float
    alpha: float
    eta: float

    def __post_init__(self):
        for name in ("S", "r", "alpha", "eta"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise DomainError(f"{name} must be a finite number, got {v!r}")
        if self.S <= 0.0 or self.alpha <= 0.0 or self.eta <= 0.0:
            raise DomainError("S, alpha and eta must be positive")
        if self.r < 0.0:
            raise DomainError("r must be nonnegative")

    @property
    def t_max(self):
        """Largest expiry accepted before exp(eta T) is considered unsafe."""
        return ETA_T_MAX / self.eta

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        keys = {"S", "r", "alpha", "eta"}
        extra = set(data) - keys
        if extra:
            raise DomainError(f"unknown keys: {', '.join(sorted(extra))}")
        missing = keys - set(data)
        if missing:
            raise DomainError(f"missing keys: {', '.join(sorted(missing))}")
        return cls(**{k: data[k] for k in ("S", "r", "alpha", "eta")})


@dataclass(frozen=True)
class Coordinates:
    """phi and the pricing coordinates x, y with their expiry derivatives.

    ``rho`` is phi_T/phi, computed without cancellation for small T.
    """

    phi: float
    phi_T: float
    phi_TT: float
    x: float
    y: float
    x_T: float
    y_T: float
    x_TT: float
    rho: float


@dataclass(frozen=True)
class OptionQuote:
    strike: float
    expiry: float
    price: float = None
    kind: str = "call"

    def __post_init__(self):
        if not self.strike > 0.0 or not self.expiry > 0.0:
            raise DomainError("strike and expiry must be positive")
        if self.kind not in ("call", "put"):
            raise DomainError(f"kind must be 'call' or 'put', got {self.kind!r}")
        if self.price is not None and not self.price >= 0.0:
            raise DomainError("price must be nonnegative")


def _check_expiry(params, T):
    if not T >= 0.0:
        raise DomainError(f"expiry must be nonnegative, got {T!r}")
    if T > params.t_max:
        raise DomainError(
            f"expiry {T} exceeds the cap {params.t_max:.6g} (eta*T <= {ETA_T_MAX:g})")


def _check_strike(K):
    if not K > 0.0 or math.isinf(K):
        raise DomainError(f"strike must be positive and finite, got {K!r}")


def phi(params, T):
    """Time transform (alpha/(4 eta)) expm1(eta T); exactly 0 at T = 0."""
    _check_expiry(params, T)
    return params.alpha / (4.0 * params.eta) * math.expm1(params.eta * T)


def phi_derivatives(params, T):
    """(phi, phi_T, phi_TT) at expiry T."""
    _check_expiry(params, T)
    g = math.exp(params.eta * T)
    return (phi(params, T), 0.25 * params.alpha * g, 0.25 * params.alpha * params.eta * g)


def coordinates(params, K, T):
    """Pricing coordinates at strike K and expiry T."""
    _check_strike(K)
    _check_expiry(params, T)
    if T <= T_EPS:
        raise DegenerateExpiryError(f"expiry {T} is below {T_EPS:g}")
    p, p_t, p_tt = phi_derivatives(params, T)
    eta = params.eta
    rho = eta / -math.expm1(-eta * T)
    x = params.S / p
    y = K * math.exp(-params.r * T) / p
    return Coordinates(
        phi=p, phi_T=p_t, phi_TT=p_tt, x=x, y=y,
        x_T=-x * rho,
        y_T=-y * (params.r + rho),
        x_TT=x * rho * (2.0 * rho - eta),
        rho=rho,
    )


def _log_sub(a, b):
    # ln(exp(a) - exp(b)), -inf when the difference is not positive
    if b == -math.inf:
        return a
    if b >= a:
        return -math.inf
    return a + math.log1p(-math.exp(b - a))


def _log1mexp(a):
    # ln(1 - exp(a)) for a <= 0
    if a > -_LN2:
        return math.log(-math.expm1(a))
    return math.log1p(-math.exp(a))


_LN2 = math.log(2.0)


def _tail_pair(y, delta, x, log_mass, upper_first):
    """(ln lower, ln upper) of the continuous part; the smaller side is summed."""
    if upper_first:
        up = kernels.log_ncx2_tail(y, delta, x, True)
        low = log_mass + _log1mexp(up - log_mass) if up < log_mass else -math.inf
    else:
        low = kernels.log_ncx2_tail(y, delta, x, False)
        up = log_mass + _log1mexp(low - log_mass) if low < log_mass else -math.inf
    return low, up


class _Pricing:
    """Shared intermediate results for one (K, T)."""

    __slots__ = ("c", "ln_S", "ln_kd", "ln_mc", "ln_kz", "kz", "otm_call", "ln_otm")

    def __init__(self, params, K, T):
        c = coordinates(params, K, T)
        self.c = c
        x, y = c.x, c.y
        self.ln_S = math.log(params.S)
        self.ln_kd = math.log(K) - params.r * T
        self.ln_mc = _log1mexp(-0.5 * x)
        self.ln_kz = self.ln_kd + self.ln_mc
        # same expression as zcb_price so the bounds below are exact
        self.kz = K * (math.exp(-params.r * T) * -math.expm1(-0.5 * x))
        # out of the money relative to the forward S/Z
        self.otm_call = self.kz >= params.S
        low4, up4 = _tail_pair(y, 4.0, x, 0.0, y >= continuous_mean(4.0, x))
        low0, up0 = _tail_pair(y, 0.0, x, self.ln_mc, y >= continuous_mean(0.0, x))
        if self.otm_call:
            self.ln_otm = _log_sub(self.ln_S + up4, self.ln_kd + up0)
        else:
            self.ln_otm = _log_sub(self.ln_kd + low0, self.ln_S + low4)

    def call_put(self, S):
        otm = math.exp(self.ln_otm)
        kz = self.kz
        if self.otm_call:
            call = min(otm, S)
            put = call + kz - S
            put = min(max(put, kz - S, 0.0), kz)
        else:
            put = min(otm, kz)
            call = put + S - kz
            call = min(max(call, S - kz, 0.0), S)
        return call, put


def _degenerate(T):
    return T <= T_EPS


def call_price(params, K, T):
    """Benchmarked European call price at strike K and expiry T."""
    _check_strike(K)
    _check_expiry(params, T)
    if _degenerate(T):
        return max(params.S - K, 0.0)
    return _Pricing(params, K, T).call_put(params.S)[0]


def put_price(params, K, T):
    """European put price; satisfies C + K Z = P + S."""
    _check_strike(K)
    _check_expiry(params, T)
    if _degenerate(T):
        return max(K - params.S, 0.0)
    return _Pricing(params, K, T).call_put(params.S)[1]


def option_price(params, K, T, kind="call"):
    if kind == "call":
        return call_price(params, K, T)
    if kind == "put":
        return put_price(params, K, T)
    raise DomainError(f"kind must be 'call' or 'put', got {kind!r}")


def zcb_price(params, T):
    """Zero-coupon bond exp(-rT) (1 - exp(-x/2)); equal to 1 at T = 0."""
    _check_expiry(params, T)
    if _degenerate(T):
        return 1.0
    x = params.S / phi(params, T)
    return math.exp(-params.r * T) * -math.expm1(-0.5 * x)


def yield_to_maturity(params, T):
    """r_hat(T) = -ln Z(T) / T, which tends to r + eta for large T."""
    _check_expiry(params, T)
    if _degenerate(T):
        return params.r
    x = params.S / phi(params, T)
    return params.r - _log1mexp(-0.5 * x) / T


def zcb_theta(params, T):
    """dZ/dT."""
    c = coordinates(params, 1.0, T)
    disc = math.exp(-params.r * T)
    return -params.r * zcb_price(params, T) + 0.5 * disc * math.exp(-0.5 * c.x) * c.x_T


def zcb_theta2(params, T):
    """d2Z/dT2."""
    c = coordinates(params, 1.0, T)
    r = params.r
    disc = math.exp(-r * T)
    extra = 0.5 * disc * math.exp(-0.5 * c.x) * (-r * c.x_T - 0.5 * c.x_T ** 2 + c.x_TT)
    return -r * zcb_theta(params, T) + extra


def _densities(c, orders):
    return {d: ncx2_pdf(ChiSquareArgs(c.y, float(d), c.x)) for d in orders}


def call_theta(params, K, T):
    """dC/dT = 2 S rho p(y;4,x) + r K exp(-rT) Q(y;0,x), which is nonnegative."""
    c = coordinates(params, K, T)
    p4 = _densities(c, (4,))[4]
    q0 = ncx2_ccdf(ChiSquareArgs(c.y, 0.0, c.x))
    kd = K * math.exp(-params.r * T)
    return 2.0 * params.S * c.rho * p4 + params.r * kd * q0


def call_theta2(params, K, T):
    """d2C/dT2 from the analytic expression in five chi-square densities.

    Accurate for T in [1e-8, t_max]; below that the terms cancel beyond
    double precision.
    """
    c = coordinates(params, K, T)
    p = _densities(c, (0, 2, 4, 6))
    q0 = ncx2_ccdf(ChiSquareArgs(c.y, 0.0, c.x))
    S, r, eta = params.S, params.r, params.eta
    kd = K * math.exp(-r * T)
    rho_t = -c.rho * eta / math.expm1(eta * T)
    out = 2.0 * S * rho_t * p[4]
    out += S * c.rho * ((p[2] - p[4]) * c.y_T + (p[6] - p[4]) * c.x_T)
    out -= r * r * kd * q0
    out += r * kd * (-p[0] * c.y_T + p[2] * c.x_T)
    return out


def call_bounds(params, K, T):
    """No-arbitrage bounds (max(S - K Z, 0), S) for the call."""
    z = zcb_price(params, T)
    return max(params.S - K * z, 0.0), params.S


def log_call_price(params, K, T):
    """ln C, finite even when C underflows (deep out of the money, small T)."""
    _check_strike(K)
    _check_expiry(params, T)
    if _degenerate(T):
        v = max(params.S - K, 0.0)
        return math.log(v) if v > 0.0 else -math.inf
    pr = _Pricing(params, K, T)
    if pr.otm_call:
        return min(pr.ln_otm, pr.ln_S)
    return math.log(pr.call_put(params.S)[0])


def log_otm_price(params, K, T):
    """(kind, ln price) of the option that is out of the money against the forward."""
    _check_strike(K)
    pr = _Pricing(params, K, T)
    kind = "call" if pr.otm_call else "put"
    cap = pr.ln_S if pr.otm_call else pr.ln_kz
    return kind, min(pr.ln_otm, cap)


def log_call_excess(params, K, T):
    """ln(C - max(S - K Z, 0)).

    When K Z >= S the excess is the call itself; otherwise parity turns it
    into the put.  Either way it is the out-of-the-money price, summed
    directly in log space.  Strikes within a relative 1e-9 of S are rejected.
    """
    _check_strike(K)
    if abs(K - params.S) <= ATM_REL_TOL * params.S:
        raise DomainError("strike is at the money; the excess form needs K != S")
    if _degenerate(T):
        raise NonPositiveExcessError(f"no time value at expiry {T}")
    _, ln_ex = log_otm_price(params, K, T)
    if ln_ex == -math.inf:
        raise NonPositiveExcessError(
            f"call price equals its intrinsic bound at K={K}, T={T}")
    return ln_ex
