"""Quick invariant suite behind ``mmmvol verify``.

Each check returns ``(name, passed, detail)``.  The suite is a fast subset
of the test-suite: enough to catch a broken build or a bad parameter set.
"""

import math
import random
from concurrent.futures import ThreadPoolExecutor

from . import mmm
from .asymptotics import large_time_limit, small_time_limit
from .blackscholes import bs_call_mmm
from .implied import implied_vol, implied_vol_mmm
from .oracle import mc_call_price
from .specfun import ChiSquareArgs, ncx2_cdf, ncx2_cdf_oracle, ncx2_pdf


def _check_parity(params, rng):
    worst = 0.0
    for _ in range(200):
        K = params.S * math.exp(rng.uniform(-1.5, 1.5))
        T = math.exp(rng.uniform(math.log(1e-3), math.log(100.0)))
        c = mmm.call_price(params, K, T)
        p = mmm.put_price(params, K, T)
        z = mmm.zcb_price(params, T)
        worst = max(worst, abs(c + K * z - p - params.S) / params.S)
    return "put-call parity", worst <= 1e-12, f"max rel err {worst:.3g}"


def _check_bounds(params, rng):
    bad = 0
    for i in range(15):
        for j in range(15):
            K = params.S * (0.5 + 1.5 * i / 14)
            T = 10 ** (-3 + 5 * j / 14)
            c = mmm.call_price(params, K, T)
            lo, hi = mmm.call_bounds(params, K, T)
            if not (lo <= c <= hi and mmm.call_theta(params, K, T) >= 0.0):
                bad += 1
    return "arbitrage bounds and C_T >= 0", bad == 0, f"{bad} violations on 15x15 grid"


def _check_ncx2(params, rng):
    worst = 0.0
    for _ in range(25):
        a = ChiSquareArgs(rng.uniform(0.0, 40.0), rng.choice([0.0, 2.0, 4.0, 6.0]),
                          rng.uniform(0.0, 30.0))
        worst = max(worst, abs(ncx2_cdf(a) - ncx2_cdf_oracle(a, 1e-11)))
    return "chi-square cdf vs quadrature", worst <= 1e-9, f"max abs err {worst:.3g}"


def _check_identity(params, rng):
    worst = 0.0
    for _ in range(50):
        x, y = rng.uniform(1e-3, 50.0), rng.uniform(1e-3, 50.0)
        p0 = ncx2_pdf(ChiSquareArgs(y, 0.0, x))
        p4 = ncx2_pdf(ChiSquareArgs(y, 4.0, x))
        if p4 > 1e-290:
            worst = max(worst, abs(p4 - y / x * p0) / p4)
    return "density identity p4 = (y/x) p0", worst <= 1e-12, f"max rel err {worst:.3g}"


def _check_limits(params, rng):
    s = small_time_limit(params, params.S)
    ok = s == math.sqrt(params.alpha / params.S) and large_time_limit(params) > 0.0
    shifted = mmm.ModelParams(params.S, params.r + 0.05, params.alpha, params.eta)
    ok = ok and small_time_limit(shifted, 1.2 * params.S) == small_time_limit(params, 1.2 * params.S)
    return "closed-form limits", ok, f"small {s:.6g}, large {large_time_limit(params):.6g}"


def _check_small_time(params, rng):
    target = small_time_limit(params, params.S)
    errs = [abs(implied_vol_mmm(params, params.S, T).vol - target) for T in (1e-2, 1e-3, 1e-4)]
    ok = errs[0] > errs[1] > errs[2] and errs[2] <= 0.01 * target
    return "small-time ATM convergence", ok, "errors " + ", ".join(f"{e:.3g}" for e in errs)


def _check_roundtrip(params, rng):
    worst = 0.0
    for v in (0.05, 0.2, 1.0):
        for _ in range(10):
            T = math.exp(rng.uniform(math.log(1e-2), math.log(5.0)))
            fwd = params.S / mmm.zcb_price(params, T)
            K = fwd * math.exp(rng.uniform(-1.5, 1.5) * v * math.sqrt(T))
            worst = max(worst, abs(implied_vol(params, K, T, bs_call_mmm(params, K, T, v)).vol - v))
    return "implied vol round trip", worst <= 1e-9, f"max abs err {worst:.3g}"


def _check_mc(params, rng):
    est = mc_call_price(params, params.S, 1.0, 200_000, 12345)
    c = mmm.call_price(params, params.S, 1.0)
    z = est.z_score(c)
    return "Monte Carlo cross-check", abs(z) <= 4.0, f"z = {z:.3f}"


CHECKS = (_check_parity, _check_bounds, _check_ncx2, _check_identity, _check_limits,
          _check_small_time, _check_roundtrip, _check_mc)


def run_checks(params, seed=0, workers=1):
    """Run every check; results are in a fixed order whatever ``workers`` is."""

    def run(i):
        fn = CHECKS[i]
        try:
            return fn(params, random.Random(seed * 1000 + i))
        except Exception as exc:  # a crash is a failed check, not an abort
            return fn.__name__.strip("_"), False, f"{type(exc).__name__}: {exc}"

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(run, range(len(CHECKS))))
    return [run(i) for i in range(len(CHECKS))]
