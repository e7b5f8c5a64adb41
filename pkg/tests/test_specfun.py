import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special, stats

from mmmvol.errors import DomainError, NonConvergenceError, RangeOverflowError
from mmmvol.specfun import (ChiSquareArgs, bessel_i, bessel_i_scaled, continuous_mean,
                            ncx2_ccdf, ncx2_ccdf_oracle, ncx2_cdf, ncx2_cdf_oracle,
                            ncx2_log_ccdf, ncx2_log_cdf, ncx2_logpdf, ncx2_pdf, norm_cdf,
                            norm_logcdf, norm_pdf)

from reference_values import NCX2


def A(y, d, x):
    return ChiSquareArgs(float(y), float(d), float(x))


# --- Bessel functions ------------------------------------------------------

def test_bessel_at_zero():
    assert bessel_i(0, 0.0) == 1.0
    assert bessel_i(1, 0.0) == 0.0
    assert bessel_i_scaled(0, 0.0) == 1.0
    assert bessel_i_scaled(1, 0.0) == 0.0


def test_negative_order_one_is_order_one():
    assert bessel_i(-1, 3.7) == bessel_i(1, 3.7)


def test_bessel_order_two_against_power_series():
    z = 1.5
    series = math.fsum((z / 2) ** (2 * k + 2) / (math.factorial(k) * math.factorial(k + 2))
                       for k in range(60))
    assert bessel_i(2, z) == pytest.approx(series, rel=1e-12)


def test_scaled_bessel_large_argument():
    lead = 1.0 / math.sqrt(2.0 * math.pi * 700.0)
    assert bessel_i_scaled(0, 700.0) == pytest.approx(lead, rel=2e-3)


@pytest.mark.parametrize("nu", [0, 1, 2, 3])
@pytest.mark.parametrize("z", [1e-8, 0.3, 2.0, 17.5, 240.0, 5e4])
def test_scaled_bessel_matches_scipy(nu, z):
    assert bessel_i_scaled(nu, z) == pytest.approx(special.ive(nu, z), rel=1e-13)


def test_unscaled_bessel_overflow_is_reported():
    assert math.isfinite(bessel_i(0, 700.0))
    with pytest.raises(RangeOverflowError):
        bessel_i(0, 800.0)


@pytest.mark.parametrize("nu", [-2, 4, 0.5])
def test_bessel_rejects_unsupported_order(nu):
    with pytest.raises(DomainError):
        bessel_i_scaled(nu, 1.0)


def test_bessel_rejects_negative_argument():
    with pytest.raises(DomainError):
        bessel_i(0, -1.0)


# --- argument validation -------------------------------------------------

@pytest.mark.parametrize("bad", [(-1.0, 4.0, 1.0), (1.0, -2.0, 1.0), (1.0, 4.0, -0.5),
                                 (math.nan, 4.0, 1.0), (1.0, 4.0, math.inf)])
def test_chi_square_args_validation(bad):
    with pytest.raises(DomainError):
        ChiSquareArgs(*bad)


def test_atom_and_continuous_mass():
    a = A(1.0, 0.0, 2.0)
    assert a.atom == math.exp(-1.0)
    assert a.atom + a.continuous_mass == pytest.approx(1.0, abs=1e-16)
    assert A(1.0, 4.0, 2.0).atom == 0.0


def test_continuous_mean():
    assert continuous_mean(4.0, 3.0) == 7.0
    assert continuous_mean(0.0, 0.0) == 2.0
    assert continuous_mean(0.0, 1e-9) == pytest.approx(2.0, rel=1e-8)
    # E[Y | Y > 0] = x / (1 - e^{-x/2}) for zero degrees of freedom
    assert continuous_mean(0.0, 6.0) == pytest.approx(6.0 / (1 - math.exp(-3.0)))


# --- density ----------------------------------------------------------------

def test_density_vanishes_at_origin_for_four_degrees():
    assert ncx2_pdf(A(0.0, 4.0, 1.0)) == 0.0


def test_density_at_origin_special_cases():
    assert ncx2_pdf(A(0.0, 2.0, 3.0)) == pytest.approx(0.5 * math.exp(-1.5), rel=1e-15)
    assert ncx2_pdf(A(0.0, 0.0, 3.0)) == pytest.approx(0.75 * math.exp(-1.5), rel=1e-15)


def test_density_matches_oracle_derivative():
    h = 1e-4
    fd = (ncx2_cdf_oracle(A(2.0 + h, 4, 3), 1e-13) - ncx2_cdf_oracle(A(2.0 - h, 4, 3), 1e-13)) / (2 * h)
    assert ncx2_pdf(A(2.0, 4.0, 3.0)) == pytest.approx(fd, abs=1e-8)


@pytest.mark.parametrize("y,d,x", [(0.5, 2, 1), (3, 4, 2), (40, 6, 25), (1e-3, 4, 0), (900, 4, 1000)])
def test_density_matches_scipy(y, d, x):
    ref = stats.ncx2.pdf(y, d, x) if x > 0 else stats.chi2.pdf(y, d)
    assert ncx2_pdf(A(y, d, x)) == pytest.approx(ref, rel=1e-10)


def test_log_density_far_tail_is_finite():
    lp = ncx2_logpdf(A(5000.0, 4.0, 1.0))
    assert math.isfinite(lp) and lp < -2000.0


@settings(max_examples=200, deadline=None)
@given(y=st.floats(1e-4, 200.0), x=st.floats(1e-4, 200.0))
def test_density_identity_four_and_zero(y, x):
    p4 = ncx2_pdf(A(y, 4, x))
    p0 = ncx2_pdf(A(y, 0, x))
    assert p4 == pytest.approx(y / x * p0, rel=1e-12, abs=1e-300)


@settings(max_examples=200, deadline=None)
@given(y=st.floats(1e-3, 150.0), x=st.floats(1e-3, 150.0))
def test_density_identity_six_two_four(y, x):
    lhs = -2.0 / x * ncx2_pdf(A(y, 4, x))
    rhs = ncx2_pdf(A(y, 6, x)) - y / x * ncx2_pdf(A(y, 2, x))
    scale = ncx2_pdf(A(y, 6, x)) + y / x * ncx2_pdf(A(y, 2, x))
    assert abs(lhs - rhs) <= 1e-11 * scale + 1e-300


@settings(max_examples=60, deadline=None)
@given(x=st.floats(0.0, 40.0))
def test_zero_degree_density_integrates_to_continuous_mass(x):
    # the continuous part carries 1 - e^{-x/2}; the atom carries the rest
    a = A(math.inf, 0.0, x)
    assert ncx2_cdf_oracle(a, 1e-11) == pytest.approx(1.0, abs=1e-10)
    assert ncx2_cdf_oracle(a, 1e-11) - a.atom == pytest.approx(a.continuous_mass, abs=1e-10)


# --- distribution function -----------------------------------------------------

def test_cdf_examples():
    assert ncx2_cdf(A(0.0, 0.0, 2.0)) == pytest.approx(math.exp(-1.0), rel=1e-15)
    assert ncx2_cdf(A(math.inf, 4.0, 5.0)) == 1.0
    assert ncx2_cdf(A(1e4, 4.0, 5.0)) == pytest.approx(1.0, abs=1e-10)
    assert ncx2_cdf(A(3.0, 4.0, 2.0)) == pytest.approx(ncx2_cdf_oracle(A(3.0, 4.0, 2.0)), abs=1e-9)


def test_ccdf_examples():
    assert ncx2_ccdf(A(0.0, 4.0, 1.0)) == 1.0
    assert ncx2_ccdf(A(0.0, 0.0, 2.0)) == pytest.approx(1.0 - math.exp(-1.0), rel=1e-15)
    tail = ncx2_ccdf(A(80.0, 0.0, 0.5))
    assert 0.0 < tail < 1e-12
    assert tail == pytest.approx(ncx2_ccdf_oracle(A(80.0, 0.0, 0.5)), rel=0.05)


@pytest.mark.parametrize("y,d,x,cdf,sf", NCX2)
def test_against_high_precision_reference(y, d, x, cdf, sf):
    a = A(y, d, x)
    assert ncx2_cdf(a) == pytest.approx(cdf, rel=1e-13, abs=1e-15)
    assert ncx2_ccdf(a) == pytest.approx(sf, rel=1e-12)
    assert ncx2_log_ccdf(a) == pytest.approx(math.log(sf), rel=1e-12, abs=1e-12)
    cont = cdf - a.atom
    if cont > 0.0 and cont > 1e-6 * cdf:
        assert math.exp(ncx2_log_cdf(a, include_atom=False)) == pytest.approx(cont, rel=1e-11)


def test_central_exponential_case():
    assert ncx2_cdf(A(1.0, 2.0, 0.0)) == pytest.approx(-math.expm1(-0.5), rel=1e-15)


@settings(max_examples=150, deadline=None)
@given(y=st.floats(0.0, 300.0), d=st.sampled_from([0.0, 2.0, 4.0, 6.0]), x=st.floats(0.0, 300.0))
def test_cdf_and_ccdf_are_complementary(y, d, x):
    a = A(y, d, x)
    c, q = ncx2_cdf(a), ncx2_ccdf(a)
    assert 0.0 <= c <= 1.0 and 0.0 <= q <= 1.0
    assert c + q == pytest.approx(1.0, abs=4e-16)


@settings(max_examples=100, deadline=None)
@given(y=st.floats(0.0, 100.0), dy=st.floats(1e-3, 10.0), d=st.sampled_from([0.0, 4.0]),
       x=st.floats(0.0, 100.0))
def test_cdf_is_nondecreasing(y, dy, d, x):
    assert ncx2_cdf(A(y, d, x)) <= ncx2_cdf(A(y + dy, d, x)) + 1e-16


@pytest.mark.parametrize("y,d,x", [(0.7, 0, 1.5), (5, 2, 3), (12, 4, 9), (3, 6, 20)])
def test_noncentrality_derivatives(y, d, x):
    h = 1e-5 * x
    dpdx = (ncx2_pdf(A(y, d, x + h)) - ncx2_pdf(A(y, d, x - h))) / (2 * h)
    expect = 0.5 * ncx2_pdf(A(y, d + 2, x)) - 0.5 * ncx2_pdf(A(y, d, x))
    assert dpdx == pytest.approx(expect, rel=1e-5)
    dcdx = (ncx2_cdf(A(y, d, x + h)) - ncx2_cdf(A(y, d, x - h))) / (2 * h)
    assert dcdx == pytest.approx(-ncx2_pdf(A(y, d + 2, x)), rel=1e-5)


# --- oracle -------------------------------------------------------------------------

def test_oracle_edges():
    assert ncx2_cdf_oracle(A(0.0, 4.0, 3.0)) == 0.0
    assert ncx2_cdf_oracle(A(0.0, 0.0, 3.0)) == math.exp(-1.5)
    assert ncx2_cdf_oracle(A(1.0, 2.0, 0.0)) == pytest.approx(1 - math.exp(-0.5), abs=1e-12)


def test_oracle_rejects_bad_tolerance():
    with pytest.raises(DomainError):
        ncx2_cdf_oracle(A(1.0, 4.0, 1.0), tol=0.0)
    with pytest.raises(DomainError):
        ncx2_ccdf_oracle(A(1.0, 4.0, 1.0), rtol=-1.0)


def test_oracle_reports_nonconvergence(monkeypatch):
    import mmmvol.specfun as sf
    monkeypatch.setattr(sf, "ORACLE_MAX_EVALS", 21)
    with pytest.raises(NonConvergenceError):
        ncx2_cdf_oracle(A(400.0, 4.0, 380.0), tol=1e-14)


# --- normal distribution --------------------------------------------------------------

def test_normal_functions():
    assert norm_cdf(0.0) == 0.5
    assert norm_cdf(40.0) == 1.0
    assert norm_cdf(1.96) == pytest.approx(0.9750021049, abs=1e-9)
    assert norm_pdf(0.0) == pytest.approx(1 / math.sqrt(2 * math.pi))
    u = 40.0
    tail = 1 - u ** -2 + 3 * u ** -4 - 15 * u ** -6 + 105 * u ** -8
    expect = -0.5 * u * u - math.log(u) - 0.5 * math.log(2 * math.pi) + math.log(tail)
    assert norm_logcdf(-u) == pytest.approx(expect, rel=1e-14)
    assert math.isfinite(norm_logcdf(-1e5))
