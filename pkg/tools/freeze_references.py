"""Print high-precision reference values frozen into tests/reference_values.py.

Needs mpmath (``pip install mpmath``); the package itself does not.  Run
``python tools/freeze_references.py > tests/reference_values.py``.
"""

import mpmath as mp

mp.mp.dps = 50

S, R, ALPHA, ETA = map(mp.mpf, ("1362.18", "0.0011154", "43.307", "0.089896"))

NCX2_CASES = [
    (1.0, 0.0, 1.0), (0.5, 0.0, 3.0), (10.0, 0.0, 4.0), (3.0, 2.0, 0.0), (5.0, 2.0, 2.5),
    (8.0, 4.0, 1.0), (30.0, 4.0, 20.0), (80.0, 0.0, 0.5), (1e-3, 4.0, 2.0), (150.0, 6.0, 120.0),
    (2.0, 6.0, 40.0),
]

PRICE_CASES = [(1.0, 1.0), (0.7, 0.5), (1.3, 2.0), (0.5, 10.0), (2.0, 10.0), (1.0, 100.0),
               (0.8, 1e-3), (1.25, 1e-3)]

IV_CASES = [(1.0, 1.0), (0.5, 1.0), (2.0, 5.0), (1.0, 1e-4), (0.5, 400.0), (1.0, 400.0),
            (2.0, 400.0)]


def density(u, d, x):
    """Density of the continuous part; the delta = 0 atom is excluded."""
    u, x = mp.mpf(u), mp.mpf(x)
    if u == 0:
        return mp.mpf(0)
    if x == 0:
        k = mp.mpf(d) / 2
        return mp.exp((k - 1) * mp.log(u) - u / 2 - k * mp.log(2) - mp.loggamma(k))
    nu = mp.mpf(d) / 2 - 1
    return mp.exp(-(x + u) / 2 + (nu / 2) * mp.log(u / x)) * mp.besseli(nu, mp.sqrt(x * u)) / 2


def tails(y, d, x):
    """(P(0 < Y <= y), P(Y > y)) for the continuous part, each by its own quadrature."""
    y, x = mp.mpf(y), mp.mpf(x)
    # scale of the continuous part; for delta = 0 it spreads like delta = 2
    dd = max(mp.mpf(d), mp.mpf(2))
    mean = dd + x
    sd = mp.sqrt(2 * (dd + 2 * x))
    pts = [mean + k * sd for k in range(-60, 61, 2)]
    if abs(y - mean) > 10 * sd:
        # far tail: resolve the density's decay length next to y
        h = 1 / abs(mp.diff(lambda u: mp.log(density(u, 4, x)), y))
        pts += [y + j * h / 2 for j in range(-400, 401) if j != 0]
    pts = sorted(set(pts))
    f = lambda u: density(u, d, x)  # noqa: E731
    lower = mp.quad(f, [mp.mpf(0)] + [p for p in pts if 0 < p < y] + [y])
    upper = mp.quad(f, [y] + [p for p in pts if p > y] + [mp.inf])
    return lower, upper


def prices(K, T):
    """(call, put, zcb) at the fixture parameters, each option from its own tails."""
    K, T = mp.mpf(K), mp.mpf(T)
    phi = ALPHA / (4 * ETA) * mp.expm1(ETA * T)
    x = S / phi
    kd = K * mp.exp(-R * T)
    y = kd / phi
    lo4, up4 = tails(y, 4, x)
    lo0, up0 = tails(y, 0, x)
    call = S * up4 - kd * up0
    put = kd * lo0 - S * lo4
    zcb = mp.exp(-R * T) * -mp.expm1(-x / 2)
    return call, put, zcb


def implied_vol(K, T):
    """Bisection in log price on the out-of-the-money option."""
    call, put, zcb = prices(K, T)
    K, T = mp.mpf(K), mp.mpf(T)
    use_call = K * zcb >= S
    target = call if use_call else put

    def bs(v):
        s = v * mp.sqrt(T)
        d1 = mp.log(S / (K * zcb)) / s + s / 2
        d2 = d1 - s
        if use_call:
            return S * mp.ncdf(d1) - K * zcb * mp.ncdf(d2)
        return K * zcb * mp.ncdf(-d2) - S * mp.ncdf(-d1)

    lo, hi = mp.mpf("1e-3"), mp.mpf(3)
    for _ in range(180):
        mid = (lo + hi) / 2
        if mp.log(bs(mid)) < mp.log(target):
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def main():
    print('"""High-precision reference values (50-digit mpmath, tools/freeze_references.py)."""')
    print()
    print("FIXTURE = dict(S=1362.18, r=0.0011154, alpha=43.307, eta=0.089896)")
    print()
    print("# (y, delta, x, cdf including the atom at 0, survival function)")
    print("NCX2 = [")
    for y, d, x in NCX2_CASES:
        lower, sf = tails(y, d, x)
        cdf = lower + (mp.exp(-mp.mpf(x) / 2) if d == 0 else 0)
        print(f"    ({y!r}, {d!r}, {x!r}, {mp.nstr(cdf, 20)}, {mp.nstr(sf, 20)}),")
    print("]")
    print()
    print("# (K/S, T, call, put, zcb, ln of the out-of-the-money price)")
    print("PRICES = [")
    for k, T in PRICE_CASES:
        K = mp.mpf(k) * S
        c, p, z = prices(K, T)
        gap = abs(c + K * z - p - S) / S
        assert gap < mp.mpf(10) ** -30, (k, T, gap)
        ln_otm = mp.log(c if K * z >= S else p)
        print(f"    ({k!r}, {T!r}, {mp.nstr(c, 20)}, {mp.nstr(p, 20)}, {mp.nstr(z, 20)}, "
              f"{mp.nstr(ln_otm, 20)}),")
    print("]")
    print()
    print("# (K/S, T, implied vol)")
    print("IMPLIED_VOLS = [")
    for k, T in IV_CASES:
        print(f"    ({k!r}, {T!r}, {mp.nstr(implied_vol(mp.mpf(k) * S, T), 20)}),")
    print("]")


if __name__ == "__main__":
    main()
