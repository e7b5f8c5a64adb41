import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from mmmvol.blackscholes import (BsContext, bs_call, bs_call_direct, bs_call_mmm, bs_d1_d2,
                                 bs_log_price, bs_log_vega, bs_put, bs_vega, mmm_context)
from mmmvol.errors import DomainError, ZeroVolatilityError
from mmmvol.mmm import zcb_price


def test_context_validation():
    with pytest.raises(DomainError):
        BsContext(100.0, 100.0, 0.0, 0.2)
    with pytest.raises(DomainError):
        BsContext(100.0, 100.0, 1.0, -0.2)
    with pytest.raises(DomainError):
        BsContext(100.0, 100.0, 1.0, 0.2, bond=1.5)


def test_forward_moneyness():
    ctx = BsContext(100.0, 90.0, 2.0, 0.2, kappa=0.01, bond=0.95)
    assert ctx.xi == pytest.approx(math.log(100 / 90) - math.log(0.95) - 0.02)
    assert ctx.forward_spot == pytest.approx(100 * math.exp(-0.02))
    assert ctx.with_vol(0.3).v == 0.3


def test_d1_d2_at_the_money():
    d1, d2 = bs_d1_d2(BsContext(100.0, 100.0, 4.0, 0.25))
    assert d1 == pytest.approx(0.25)
    assert d2 == pytest.approx(-0.25)
    with pytest.raises(ZeroVolatilityError):
        bs_d1_d2(BsContext(100.0, 100.0, 4.0, 0.0))


def test_textbook_value():
    assert bs_call(BsContext(100.0, 100.0, 1.0, 0.2)) == pytest.approx(7.9656, abs=1e-3)


def test_against_lognormal_payoff_integral():
    S, K, T, v, bond = 100.0, 110.0, 1.5, 0.3, 0.96
    fwd = S / bond
    sig = v * math.sqrt(T)

    def payoff(z):
        return max(fwd * math.exp(sig * z - 0.5 * sig * sig) - K, 0.0) * stats.norm.pdf(z)

    ref = bond * integrate.quad(payoff, -12, 12, points=[math.log(K / fwd) / sig + sig / 2],
                                epsabs=1e-13)[0]
    assert bs_call(BsContext(S, K, T, v, bond=bond)) == pytest.approx(ref, rel=1e-10)


def test_volatility_limits():
    ctx = BsContext(100.0, 90.0, 1.0, 0.0, kappa=0.02, bond=0.97)
    assert bs_call(ctx) == pytest.approx(max(ctx.forward_spot - 90.0 * 0.97, 0.0))
    assert bs_put(ctx) == 0.0
    assert bs_call(ctx.with_vol(1e6)) == pytest.approx(ctx.forward_spot, abs=1e-12 * 100)
    assert bs_call(ctx.with_vol(math.inf)) == ctx.forward_spot


def test_vega():
    ctx = BsContext(100.0, 105.0, 0.5, 0.25, bond=0.99)
    h = 1e-6
    fd = (bs_call(ctx.with_vol(0.25 + h)) - bs_call(ctx.with_vol(0.25 - h))) / (2 * h)
    assert bs_vega(ctx) == pytest.approx(fd, rel=1e-7)
    assert bs_vega(ctx.with_vol(50.0)) < 1e-30
    with pytest.raises(ZeroVolatilityError):
        bs_vega(ctx.with_vol(0.0))


def test_log_vega_matches_vega():
    ctx = BsContext(100.0, 120.0, 0.25, 0.2)
    assert bs_log_vega(ctx) == pytest.approx(math.log(bs_vega(ctx)), rel=1e-13)


def test_log_price_survives_underflow():
    ctx = BsContext(100.0, 200.0, 1e-4, 0.2)
    assert bs_call(ctx) == 0.0
    lp = bs_log_price(ctx, "call")
    assert math.isfinite(lp) and lp < -700


# ln price at 60 digits (mpmath), far beyond the range where the two terms differ in double
@pytest.mark.parametrize("S,K,T,v,bond,kind,ref", [
    (100.0, 300.0, 1e-9, 0.2, 1.0, "call", -15086862042.023045074),
    (100.0, 40.0, 1e-6, 0.1, 0.99, "put", -42905412.942875191207),
    (100.0, 105.86424247262101, 4.1337427312501353e-10, 0.4814909458616813, 0.9456915427485235,
     "call", -6899.6762202686728375),
])
def test_log_price_deep_out_of_the_money(S, K, T, v, bond, kind, ref):
    assert bs_log_price(BsContext(S, K, T, v, bond=bond), kind) == pytest.approx(ref, rel=1e-12)


@settings(max_examples=300, deadline=None)
@given(k=st.floats(0.2, 5.0), T=st.floats(1e-4, 50.0), v=st.floats(1e-3, 3.0),
       kappa=st.floats(0.0, 0.1), bond=st.floats(0.05, 1.0))
def test_parity_and_bounds(k, T, v, kappa, bond):
    S, K = 100.0, 100.0 * k
    ctx = BsContext(S, K, T, v, kappa, bond)
    c, p = bs_call(ctx), bs_put(ctx)
    assert c - p == pytest.approx(ctx.forward_spot - K * bond, abs=1e-12 * (S + K))
    assert max(ctx.forward_spot - K * bond, 0.0) <= c <= ctx.forward_spot
    assert max(K * bond - ctx.forward_spot, 0.0) <= p <= K * bond


@settings(max_examples=200, deadline=None)
@given(k=st.floats(0.5, 2.0), T=st.floats(1e-2, 10.0), v=st.floats(0.05, 1.0))
def test_stable_call_matches_direct_formula(k, T, v):
    ctx = BsContext(100.0, 100.0 * k, T, v, bond=0.98)
    assert bs_call(ctx) == pytest.approx(bs_call_direct(ctx), rel=1e-9, abs=1e-12)


def test_model_bond_is_used(params):
    K, T = 1400.0, 3.0
    ctx = mmm_context(params, K, T, 0.2)
    assert ctx.bond == zcb_price(params, T)
    assert bs_call_mmm(params, K, T, 0.2) == bs_call(ctx)
    r_hat = -math.log(ctx.bond) / T
    assert bs_call_mmm(params, K, T, 0.0) == pytest.approx(max(params.S - K * math.exp(-r_hat * T), 0.0))


def test_unknown_kind():
    with pytest.raises(DomainError):
        bs_log_price(BsContext(1.0, 1.0, 1.0, 0.2), "digital")
