"""Pure-Python numerical kernels.

This module is the reference implementation of the hot loops and the
fallback used when the compiled extension ``mmmvol._kernels`` is not
available.  Both modules expose the same functions with the same
signatures and must agree to rounding.

Notation used throughout: ``pi(a, t) = exp(-t) t**a / Gamma(a + 1)`` is the
Poisson weight (generalised to real ``a``), ``P(a, t)`` and ``Q(a, t)`` are
the regularised lower and upper incomplete gamma functions.
"""

import math

NEG_INF = -math.inf
_LN_2PI = math.log(2.0 * math.pi)
_HALF_LN_2PI = 0.5 * _LN_2PI

# Stirling series coefficients 1/12, 1/360, 1/1260, 1/1680, 1/1188.
_S0 = 1.0 / 12.0
_S1 = 1.0 / 360.0
_S2 = 1.0 / 1260.0
_S3 = 1.0 / 1680.0
_S4 = 1.0 / 1188.0

# Terms below exp(-40) of the running sum are dropped (relative 4e-18).
_DROP = 40.0
_REANCHOR = 16
_MAX_ITER = 10_000_000


def _stirlerr(n):
    """ln Gamma(n+1) - (n+1/2) ln n + n - ln sqrt(2 pi), for n >= 10."""
    nn = n * n
    if n > 500.0:
        return (_S0 - _S1 / nn) / n
    if n > 80.0:
        return (_S0 - (_S1 - _S2 / nn) / nn) / n
    if n > 35.0:
        return (_S0 - (_S1 - (_S2 - _S3 / nn) / nn) / nn) / n
    if n > 15.0:
        return (_S0 - (_S1 - (_S2 - (_S3 - _S4 / nn) / nn) / nn) / nn) / n
    return math.lgamma(n + 1.0) - (n + 0.5) * math.log(n) + n - _HALF_LN_2PI


def _bd0(x, m):
    """Deviance term x ln(x/m) + m - x, accurate when x is close to m."""
    if abs(x - m) < 0.1 * (x + m):
        v = (x - m) / (x + m)
        s = (x - m) * v
        ej = 2.0 * x * v
        v2 = v * v
        j = 1
        while True:
            ej *= v2
            s1 = s + ej / (2 * j + 1)
            if s1 == s:
                return s1
            s = s1
            j += 1
    return x * math.log(x / m) + m - x


def log_poisson(a, t):
    """ln pi(a, t) for real a >= 0 and t >= 0."""
    if t == 0.0:
        return 0.0 if a == 0.0 else NEG_INF
    if a == 0.0:
        return -t
    if a < 10.0:
        return a * math.log(t) - t - math.lgamma(a + 1.0)
    return -_stirlerr(a) - _bd0(a, t) - 0.5 * math.log(2.0 * math.pi * a)


def _log_add(a, b):
    if a < b:
        a, b = b, a
    if b == NEG_INF:
        return a
    return a + math.log1p(math.exp(b - a))


def _log_series_p(a, t):
    # ln P(a, t) by the ascending series; best for t < a + 1
    term = 1.0
    total = 1.0
    k = 1
    while k < _MAX_ITER:
        term *= t / (a + k)
        total += term
        if term < 1e-17 * total:
            break
        k += 1
    return log_poisson(a, t) + math.log(total)


def _log_cf_q(a, t):
    # ln Q(a, t) by the Legendre continued fraction (modified Lentz); t >= a + 1
    tiny = 1e-300
    b = t + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    i = 1
    while i < _MAX_ITER:
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
        i += 1
    return math.log(a) + log_poisson(a, t) + math.log(h)


def log_gamma_p(a, t):
    """ln P(a, t), regularised lower incomplete gamma, a > 0."""
    if t <= 0.0:
        return NEG_INF
    if t < a + 1.0:
        return _log_series_p(a, t)
    q = math.exp(_log_cf_q(a, t))
    return math.log1p(-q)


def log_gamma_q(a, t):
    """ln Q(a, t), regularised upper incomplete gamma, a > 0."""
    if t <= 0.0:
        return 0.0
    if t < a + 1.0:
        p = math.exp(_log_series_p(a, t))
        return math.log1p(-p)
    return _log_cf_q(a, t)


def _walk_upper(lam, t, a0, n_start):
    """Sum_{n >= n_start} pi(n, lam) Q(a0 + n, t) in log space.

    Returns (log_sum, first_term).  The walk runs upward, which is the
    stable direction for Q(a+1) = Q(a) + pi(a).
    """
    n = n_start
    a = a0 + n
    lq = NEG_INF if a == 0.0 else log_gamma_q(a, t)
    lp = log_poisson(a, t)
    lw = log_poisson(float(n), lam)
    ln_lam = math.log(lam)
    ln_t = math.log(t)
    total = NEG_INF
    first = lw + lq
    prev = NEG_INF
    steps = 0
    while steps < _MAX_ITER:
        term = lw + lq
        total = _log_add(total, term)
        if term < prev and n > lam:
            r = term - prev
            # geometric bound on the remaining (log-concave) terms
            bound = term + r - math.log(-math.expm1(r))
            if bound < total - _DROP:
                break
        prev = term
        lq = _log_add(lq, lp)
        n += 1
        a = a0 + n
        steps += 1
        if steps % _REANCHOR == 0 or a < 10.0:
            lp = log_poisson(a, t)
            lw = log_poisson(float(n), lam)
        else:
            lp += ln_t - math.log(a)
            lw += ln_lam - math.log(n)
    return total, first


def _walk_lower(lam, t, a0, n_start):
    """Sum_{0 <= n <= n_start, a0+n > 0} pi(n, lam) P(a0 + n, t) in log space.

    The walk runs downward, the stable direction for P(a-1) = P(a) + pi(a-1).
    """
    n = n_start
    a = a0 + n
    lpp = log_gamma_p(a, t)
    lp = log_poisson(a - 1.0, t) if a >= 1.0 else NEG_INF
    lw = log_poisson(float(n), lam)
    ln_lam = math.log(lam)
    ln_t = math.log(t)
    total = NEG_INF
    first = lw + lpp
    prev = NEG_INF
    steps = 0
    while steps < _MAX_ITER:
        term = lw + lpp
        total = _log_add(total, term)
        if n == 0 or a0 + n - 1.0 <= 0.0:
            break
        if term < prev and n < lam:
            r = term - prev
            bound = term + r - math.log(-math.expm1(r))
            if bound < total - _DROP:
                break
        prev = term
        lpp = _log_add(lpp, lp)
        n -= 1
        a = a0 + n
        steps += 1
        if steps % _REANCHOR == 0 or a < 11.0:
            lp = log_poisson(a - 1.0, t) if a >= 1.0 else _log_poisson_neg(a - 1.0, t)
            lw = log_poisson(float(n), lam)
        else:
            lp += math.log(a) - ln_t
            lw += math.log(n + 1.0) - ln_lam
    return total, first


def _log_poisson_neg(a, t):
    # pi(a, t) for -1 < a < 0, needed when a0 is fractional
    return a * math.log(t) - t - math.lgamma(a + 1.0)


def log_ncx2_tail(y, delta, x, upper):
    """Log of one tail of the noncentral chi-square law.

    ``upper=True`` returns ln P(Y > y); ``upper=False`` returns the log of the
    lower tail *without* the point mass exp(-x/2) that exists when delta = 0.
    Both tails are computed directly as sums of positive terms, so each keeps
    full relative accuracy however small it is.
    """
    lam = 0.5 * x
    t = 0.5 * y
    a0 = 0.5 * delta
    if t <= 0.0:
        if upper:
            return math.log(-math.expm1(-lam)) if a0 == 0.0 else 0.0
        return NEG_INF
    if lam == 0.0:
        if a0 == 0.0:
            return NEG_INF
        return log_gamma_q(a0, t) if upper else log_gamma_p(a0, t)

    spread = 12.0 * math.sqrt(lam) + 10.0
    centre = math.sqrt(lam * t + 0.25 * a0 * a0) - 0.5 * a0
    if upper:
        n_bulk = max(0, int(math.floor(lam - spread)))
        est = max(lam, centre)
        n_fast = int(math.floor(est - 14.0 * math.sqrt(est + 1.0) - 10.0))
        if n_fast > n_bulk:
            total, first = _walk_upper(lam, t, a0, n_fast)
            if first < total - _DROP:
                return total
        return _walk_upper(lam, t, a0, n_bulk)[0]

    n_bulk = int(math.ceil(lam + spread))
    est = min(lam, centre)
    n_fast = max(0, int(math.ceil(est + 14.0 * math.sqrt(est + 1.0) + 10.0)))
    if a0 == 0.0:
        n_fast = max(n_fast, 1)
    if n_fast < n_bulk:
        total, first = _walk_lower(lam, t, a0, n_fast)
        if first < total - _DROP:
            return total
    return _walk_lower(lam, t, a0, n_bulk)[0]


def log_bessel_i_scaled(nu, z):
    """ln(exp(-z) I_nu(z)) for integer nu in 0..3 and z >= 0."""
    if z == 0.0:
        return 0.0 if nu == 0 else NEG_INF
    if z <= 30.0:
        h = 0.5 * z
        q = h * h
        term = 1.0
        total = 1.0
        k = 1
        while True:
            term *= q / (k * (k + nu))
            total += term
            if term < 1e-17 * total:
                break
            k += 1
        lead = nu * math.log(h) - math.lgamma(nu + 1.0)
        return lead + math.log(total) - z
    mu = 4.0 * nu * nu
    inv8z = 1.0 / (8.0 * z)
    term = 1.0
    total = 1.0
    k = 1
    while k < 200:
        nxt = -term * (mu - (2 * k - 1) ** 2) * inv8z / k
        if abs(nxt) >= abs(term):
            break
        term = nxt
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
        k += 1
    return math.log(total) - 0.5 * math.log(2.0 * math.pi * z)


def bessel_i_scaled(nu, z):
    """exp(-z) I_nu(z) for integer nu in 0..3 and z >= 0."""
    return math.exp(log_bessel_i_scaled(nu, z))
