"""Independent oracles: exact Monte Carlo pricing and finite differences.

Terminal values are drawn exactly: S_T exp(-rT)/phi(T) is noncentral
chi-square with four degrees of freedom and noncentrality S/phi(T), i.e.
(sqrt(x) + Z1)^2 + Z2^2 + Z3^2 + Z4^2.  Paths are generated in fixed-size
batches, batch ``i`` drawing from a Philox stream keyed by (seed, i), so the
estimate does not depend on how many threads run the batches.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from . import mmm
from .errors import DomainError

BATCH = 1 << 16
_U53 = 2.0 ** -53


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    n_paths: int
    seed: int

    def z_score(self, value):
        return (self.mean - value) / self.stderr if self.stderr > 0.0 else math.inf


def make_rng(seed, batch=0):
    """Counter-based generator for stream (seed, batch)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, batch])))


def standard_normals(rng, shape):
    """Normals by inverting the CDF at open-interval uniforms."""
    bits = rng.integers(0, 1 << 53, size=shape, dtype=np.int64)
    return ndtri((bits + 0.5) * _U53)


def _scale(params, T):
    p = mmm.phi(params, T)
    if not p > 0.0:
        raise DomainError(f"expiry {T} is too small to sample")
    return p, params.S / p


def sample_terminal(params, T, rng, size=None):
    """Exact draw(s) of S_T; returns a float when ``size`` is None."""
    p, x = _scale(params, T)
    n = 1 if size is None else size
    z = standard_normals(rng, (4, n))
    chi = (math.sqrt(x) + z[0]) ** 2 + z[1] ** 2 + z[2] ** 2 + z[3] ** 2
    out = p * math.exp(params.r * T) * chi
    return float(out[0]) if size is None else out


def _batches(n_paths):
    sizes = [BATCH] * (n_paths // BATCH)
    if n_paths % BATCH:
        sizes.append(n_paths % BATCH)
    return sizes


def _ratio_batch(params, K, T, seed, index, size, antithetic):
    rng = make_rng(seed, index)
    p, x = _scale(params, T)
    growth = p * math.exp(params.r * T)
    if antithetic:
        half = (size + 1) // 2
        z = standard_normals(rng, (4, half))
        out = []
        for sign in (1.0, -1.0):
            s_t = growth * ((math.sqrt(x) + sign * z[0]) ** 2 + z[1] ** 2 + z[2] ** 2 + z[3] ** 2)
            out.append(np.maximum(s_t - K, 0.0) / s_t)
        return 0.5 * (out[0] + out[1])
    z = standard_normals(rng, (4, size))
    s_t = growth * ((math.sqrt(x) + z[0]) ** 2 + z[1] ** 2 + z[2] ** 2 + z[3] ** 2)
    return np.maximum(s_t - K, 0.0) / s_t


def mc_call_price(params, K, T, n_paths, seed, workers=1, antithetic=False):
    """Monte Carlo estimate of S E[(S_T - K)_+ / S_T].

    Deterministic for a given (seed, n_paths, antithetic) whatever ``workers``
    is.  With ``antithetic`` each sample is the average over a (Z1, -Z1) pair
    and ``n_paths`` counts pairs.
    """
    if n_paths < 1000:
        raise DomainError("n_paths must be at least 1000")
    if not K >= 0.0:
        raise DomainError("strike must be nonnegative")
    sizes = _batches(n_paths)
    jobs = [(i, s) for i, s in enumerate(sizes)]

    def run(job):
        return _ratio_batch(params, K, T, seed, job[0], job[1], antithetic)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, jobs))
    else:
        parts = [run(j) for j in jobs]
    ratio = np.concatenate(parts)
    m = len(ratio)
    mean = float(np.mean(ratio))  # pairwise summation, order fixed by batch index
    std = float(np.std(ratio, ddof=1))
    return McEstimate(params.S * mean, params.S * std / math.sqrt(m), n_paths, seed)


def euler_terminal(params, T, n_steps, n_paths, seed, workers=1):
    """Full-truncation Euler scheme for dS = (rS + a(t)) dt + sqrt(a(t) S) dW.

    a(t) = alpha exp((r + eta) t).  Only used to certify the exact sampler.
    """
    dt = T / n_steps
    sq_dt = math.sqrt(dt)

    def run(job):
        index, size = job
        rng = make_rng(seed, 1_000_000 + index)
        s = np.full(size, float(params.S))
        for k in range(n_steps):
            a = params.alpha * math.exp((params.r + params.eta) * k * dt)
            sp = np.maximum(s, 0.0)
            s = s + (params.r * sp + a) * dt + np.sqrt(a * sp) * sq_dt * standard_normals(rng, size)
        return np.maximum(s, 0.0)

    jobs = list(enumerate(_batches(n_paths)))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, jobs))
    else:
        parts = [run(j) for j in jobs]
    return np.concatenate(parts)


def terminal_mean(params, T):
    """E[S_T] = exp(rT) (S + 4 phi(T))."""
    return math.exp(params.r * T) * (params.S + 4.0 * mmm.phi(params, T))


def finite_diff(f, T, order=1, step=None):
    """Central difference of ``f`` at ``T``, first or second order."""
    if step is None:
        step = 1e-6 * T if order == 1 else 1e-4 * T
    if not step > 0.0 or not T - step > 0.0:
        raise DomainError("need step > 0 and T - step > 0")
    if order == 1:
        return (f(T + step) - f(T - step)) / (2.0 * step)
    if order == 2:
        return (f(T + step) - 2.0 * f(T) + f(T - step)) / (step * step)
    raise DomainError(f"order must be 1 or 2, got {order!r}")
