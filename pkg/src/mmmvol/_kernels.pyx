# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numerical kernels; line-for-line twin of ``_kernels_py``."""

from libc.math cimport (log, log1p, exp, expm1, sqrt, lgamma, fabs, floor,
                        ceil, INFINITY, M_PI)

cdef double NEG_INF = -INFINITY
cdef double _HALF_LN_2PI = 0.5 * log(2.0 * M_PI)
cdef double _S0 = 1.0 / 12.0
cdef double _S1 = 1.0 / 360.0
cdef double _S2 = 1.0 / 1260.0
cdef double _S3 = 1.0 / 1680.0
cdef double _S4 = 1.0 / 1188.0
cdef double _DROP = 40.0
cdef long _REANCHOR = 16
cdef long _MAX_ITER = 10000000


cdef inline double _stirlerr(double n) noexcept nogil:
    cdef double nn = n * n
    if n > 500.0:
        return (_S0 - _S1 / nn) / n
    if n > 80.0:
        return (_S0 - (_S1 - _S2 / nn) / nn) / n
    if n > 35.0:
        return (_S0 - (_S1 - (_S2 - _S3 / nn) / nn) / nn) / n
    if n > 15.0:
        return (_S0 - (_S1 - (_S2 - (_S3 - _S4 / nn) / nn) / nn) / nn) / n
    return lgamma(n + 1.0) - (n + 0.5) * log(n) + n - _HALF_LN_2PI


cdef inline double _bd0(double x, double m) noexcept nogil:
    cdef double v, s, ej, v2, s1
    cdef long j
    if fabs(x - m) < 0.1 * (x + m):
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
    return x * log(x / m) + m - x


cdef double _log_poisson(double a, double t) noexcept nogil:
    if t == 0.0:
        return 0.0 if a == 0.0 else NEG_INF
    if a == 0.0:
        return -t
    if a < 10.0:
        return a * log(t) - t - lgamma(a + 1.0)
    return -_stirlerr(a) - _bd0(a, t) - 0.5 * log(2.0 * M_PI * a)


cdef inline double _log_poisson_neg(double a, double t) noexcept nogil:
    return a * log(t) - t - lgamma(a + 1.0)


cdef inline double _log_add(double a, double b) noexcept nogil:
    cdef double tmp
    if a < b:
        tmp = a
        a = b
        b = tmp
    if b == NEG_INF:
        return a
    return a + log1p(exp(b - a))


cdef double _log_series_p(double a, double t) noexcept nogil:
    cdef double term = 1.0
    cdef double total = 1.0
    cdef long k = 1
    while k < _MAX_ITER:
        term *= t / (a + k)
        total += term
        if term < 1e-17 * total:
            break
        k += 1
    return _log_poisson(a, t) + log(total)


cdef double _log_cf_q(double a, double t) noexcept nogil:
    cdef double tiny = 1e-300
    cdef double b = t + 1.0 - a
    cdef double c = 1.0 / tiny
    cdef double d = 1.0 / b
    cdef double h = d
    cdef double an, delta
    cdef long i = 1
    while i < _MAX_ITER:
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if fabs(d) < tiny:
            d = tiny
        c = b + an / c
        if fabs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if fabs(delta - 1.0) < 1e-16:
            break
        i += 1
    return log(a) + _log_poisson(a, t) + log(h)


cdef double _log_gamma_p(double a, double t) noexcept nogil:
    if t <= 0.0:
        return NEG_INF
    if t < a + 1.0:
        return _log_series_p(a, t)
    return log1p(-exp(_log_cf_q(a, t)))


cdef double _log_gamma_q(double a, double t) noexcept nogil:
    if t <= 0.0:
        return 0.0
    if t < a + 1.0:
        return log1p(-exp(_log_series_p(a, t)))
    return _log_cf_q(a, t)


cdef double _walk_upper(double lam, double t, double a0, long n_start,
                        double *first) noexcept nogil:
    cdef long n = n_start
    cdef double a = a0 + n
    cdef double lq = NEG_INF if a == 0.0 else _log_gamma_q(a, t)
    cdef double lp = _log_poisson(a, t)
    cdef double lw = _log_poisson(<double>n, lam)
    cdef double ln_lam = log(lam)
    cdef double ln_t = log(t)
    cdef double total = NEG_INF
    cdef double prev = NEG_INF
    cdef double term, r, bound
    cdef long steps = 0
    first[0] = lw + lq
    while steps < _MAX_ITER:
        term = lw + lq
        total = _log_add(total, term)
        if term < prev and n > lam:
            r = term - prev
            bound = term + r - log(-expm1(r))
            if bound < total - _DROP:
                break
        prev = term
        lq = _log_add(lq, lp)
        n += 1
        a = a0 + n
        steps += 1
        if steps % _REANCHOR == 0 or a < 10.0:
            lp = _log_poisson(a, t)
            lw = _log_poisson(<double>n, lam)
        else:
            lp += ln_t - log(a)
            lw += ln_lam - log(<double>n)
    return total


cdef double _walk_lower(double lam, double t, double a0, long n_start,
                        double *first) noexcept nogil:
    cdef long n = n_start
    cdef double a = a0 + n
    cdef double lpp = _log_gamma_p(a, t)
    cdef double lp = _log_poisson(a - 1.0, t) if a >= 1.0 else NEG_INF
    cdef double lw = _log_poisson(<double>n, lam)
    cdef double ln_lam = log(lam)
    cdef double ln_t = log(t)
    cdef double total = NEG_INF
    cdef double prev = NEG_INF
    cdef double term, r, bound
    cdef long steps = 0
    first[0] = lw + lpp
    while steps < _MAX_ITER:
        term = lw + lpp
        total = _log_add(total, term)
        if n == 0 or a0 + n - 1.0 <= 0.0:
            break
        if term < prev and n < lam:
            r = term - prev
            bound = term + r - log(-expm1(r))
            if bound < total - _DROP:
                break
        prev = term
        lpp = _log_add(lpp, lp)
        n -= 1
        a = a0 + n
        steps += 1
        if steps % _REANCHOR == 0 or a < 11.0:
            if a >= 1.0:
                lp = _log_poisson(a - 1.0, t)
            else:
                lp = _log_poisson_neg(a - 1.0, t)
            lw = _log_poisson(<double>n, lam)
        else:
            lp += log(a) - ln_t
            lw += log(n + 1.0) - ln_lam
    return total


cdef double _log_ncx2_tail(double y, double delta, double x, bint upper) noexcept nogil:
    cdef double lam = 0.5 * x
    cdef double t = 0.5 * y
    cdef double a0 = 0.5 * delta
    cdef double spread, centre, est, total, first
    cdef long n_bulk, n_fast
    if t <= 0.0:
        if upper:
            return log(-expm1(-lam)) if a0 == 0.0 else 0.0
        return NEG_INF
    if lam == 0.0:
        if a0 == 0.0:
            return NEG_INF
        return _log_gamma_q(a0, t) if upper else _log_gamma_p(a0, t)

    spread = 12.0 * sqrt(lam) + 10.0
    centre = sqrt(lam * t + 0.25 * a0 * a0) - 0.5 * a0
    if upper:
        n_bulk = <long>floor(lam - spread)
        if n_bulk < 0:
            n_bulk = 0
        est = lam if lam > centre else centre
        n_fast = <long>floor(est - 14.0 * sqrt(est + 1.0) - 10.0)
        if n_fast > n_bulk:
            total = _walk_upper(lam, t, a0, n_fast, &first)
            if first < total - _DROP:
                return total
        return _walk_upper(lam, t, a0, n_bulk, &first)

    n_bulk = <long>ceil(lam + spread)
    est = lam if lam < centre else centre
    n_fast = <long>ceil(est + 14.0 * sqrt(est + 1.0) + 10.0)
    if n_fast < 0:
        n_fast = 0
    if a0 == 0.0 and n_fast < 1:
        n_fast = 1
    if n_fast < n_bulk:
        total = _walk_lower(lam, t, a0, n_fast, &first)
        if first < total - _DROP:
            return total
    return _walk_lower(lam, t, a0, n_bulk, &first)


cdef double _log_bessel_i_scaled(int nu, double z) noexcept nogil:
    cdef double h, q, term, total, lead, mu, inv8z, nxt
    cdef long k
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
        lead = nu * log(h) - lgamma(nu + 1.0)
        return lead + log(total) - z
    mu = 4.0 * nu * nu
    inv8z = 1.0 / (8.0 * z)
    term = 1.0
    total = 1.0
    k = 1
    while k < 200:
        nxt = -term * (mu - (2 * k - 1) * (2 * k - 1)) * inv8z / k
        if fabs(nxt) >= fabs(term):
            break
        term = nxt
        total += term
        if fabs(term) < 1e-17 * fabs(total):
            break
        k += 1
    return log(total) - 0.5 * log(2.0 * M_PI * z)


def log_poisson(double a, double t):
    """ln pi(a, t) for real a >= 0 and t >= 0."""
    return _log_poisson(a, t)


def log_gamma_p(double a, double t):
    """ln P(a, t), regularised lower incomplete gamma, a > 0."""
    cdef double out
    with nogil:
        out = _log_gamma_p(a, t)
    return out


def log_gamma_q(double a, double t):
    """ln Q(a, t), regularised upper incomplete gamma, a > 0."""
    cdef double out
    with nogil:
        out = _log_gamma_q(a, t)
    return out


def log_ncx2_tail(double y, double delta, double x, bint upper):
    """Log of one noncentral chi-square tail (lower tail excludes the atom)."""
    cdef double out
    with nogil:
        out = _log_ncx2_tail(y, delta, x, upper)
    return out


def log_bessel_i_scaled(int nu, double z):
    """ln(exp(-z) I_nu(z)) for integer nu in 0..3 and z >= 0."""
    return _log_bessel_i_scaled(nu, z)


def bessel_i_scaled(int nu, double z):
    """exp(-z) I_nu(z) for integer nu in 0..3 and z >= 0."""
    return exp(_log_bessel_i_scaled(nu, z))
