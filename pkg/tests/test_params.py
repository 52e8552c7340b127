import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bilembed.params import (
    BEParams, beta_on_line, int_power, on_homogeneity_line, reduce, scaling_exponents, unreduce,
)

TWO_PI = 2 * math.pi
nonzero = st.complex_numbers(min_magnitude=1e-2, max_magnitude=1e2, allow_nan=False, allow_infinity=False)


def test_reduce_equal_orders_prefactor_is_one():
    r = reduce(BEParams(3, 3, 1, 1, 1 + 1j, 2 - 1j))
    assert r.sigma1 == pytest.approx(1 - 1j, abs=1e-15)
    assert r.tau1 == pytest.approx(2 - 1j, abs=1e-15)


def test_reduce_tau_i_is_real_and_degenerate():
    r = reduce(BEParams(1, 2, 0, 0.5, 1, 1j))
    assert r.tau1 == pytest.approx(-TWO_PI, rel=1e-15)
    assert r.tau1_degenerate
    assert not r.elliptic


def test_even_orders_negative_real_symbols_are_elliptic():
    sigma, tau = unreduce(2, 4, -1, -3)
    r = reduce(BEParams(2, 4, 0, 0, sigma, tau))
    assert r.sigma1 == pytest.approx(-1, abs=1e-12)
    assert r.tau1 == pytest.approx(-3, abs=1e-12)
    assert r.elliptic


@pytest.mark.parametrize("k,l,alpha,beta,expected", [
    (1, 2, 0, 0.5, True), (3, 2, 1, 0.5, True), (1, 2, 0.25, 0.5, False),
])
def test_on_homogeneity_line(k, l, alpha, beta, expected):
    assert on_homogeneity_line(BEParams(k, l, alpha, beta, 1, 1)) is expected


@pytest.mark.parametrize("k,l,expected", [(1, 2, (2, 1)), (3, 3, (3, 3)), (4, 2, (2, 4))])
def test_scaling_exponents(k, l, expected):
    assert scaling_exponents(BEParams(k, l, 0, 0, 1, 1)) == expected


def test_int_power_matches_repeated_product():
    z = 2j * math.pi
    assert int_power(z, 3) == z * z * z
    assert int_power(z, -2) == pytest.approx(1 / (z * z), rel=1e-15)


def test_invalid_tuples_rejected():
    with pytest.raises(ValueError):
        BEParams(0, 2, 0, 0, 1, 1)
    with pytest.raises(ValueError):
        BEParams(1, 2, 0, 0, 0, 1)
    with pytest.raises(ValueError):
        BEParams(1, 2, -1, 0, 1, 1)


@given(st.integers(1, 6), st.integers(1, 6), nonzero)
def test_equal_coefficients_reduce_to_conjugates(k, l, c):
    r = reduce(BEParams(k, l, 0, 0, c, c))
    assert abs(r.sigma1 - r.tau1.conjugate()) <= 1e-14 * abs(r.tau1)


@given(st.integers(1, 6), st.integers(1, 6), nonzero, st.floats(1e-3, 1e3))
def test_reduce_is_positively_homogeneous(k, l, c, scale):
    a = reduce(BEParams(k, l, 0, 0, 1, c)).tau1
    b = reduce(BEParams(k, l, 0, 0, 1, scale * c)).tau1
    assert b == pytest.approx(scale * a, rel=1e-14)


@given(st.integers(1, 6), st.integers(1, 6), nonzero, nonzero)
def test_unreduce_inverts_reduce(k, l, s1, t1):
    sigma, tau = unreduce(k, l, s1, t1)
    r = reduce(BEParams(k, l, 0, 0, sigma, tau))
    assert r.sigma1 == pytest.approx(s1, rel=1e-12)
    assert r.tau1 == pytest.approx(t1, rel=1e-12)


@given(st.integers(1, 6), st.integers(1, 6), nonzero, nonzero)
def test_ellipticity_survives_transposition(k, l, s, t):
    p = BEParams(k, l, 0, 0, s, t)
    assert reduce(p).elliptic == reduce(p.transposed()).elliptic


@given(st.integers(1, 6), st.integers(1, 6), st.floats(0, 3), st.floats(0, 3))
def test_line_symmetric_under_exchange(k, l, a, b):
    p = BEParams(k, l, a, b, 1, 1)
    q = BEParams(l, k, b, a, 1, 1)
    assert on_homogeneity_line(p) == on_homogeneity_line(q)


@settings(max_examples=50)
@given(st.integers(1, 6), st.integers(1, 6), st.floats(0, 2))
def test_beta_on_line_lands_on_line(k, l, alpha):
    beta = beta_on_line(k, l, alpha)
    if beta >= 0:
        assert on_homogeneity_line(BEParams(k, l, alpha, beta, 1, 1))
