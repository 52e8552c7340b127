import cmath
import math

import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from bilembed.contour import (
    halfdisk_max, inner_integral_quadrature, inner_integral_residues, near_stationary_intervals,
    oscillation_a_priori_bound, oscillatory_exp_integral, oscillatory_exp_segment, roots_upper_half,
    semicircle_correction_bound, semicircle_integral, vdc_bound, vdc_pieces,
)
from bilembed.errors import PreconditionViolation


def test_roots_examples():
    assert roots_upper_half(1j, 1).upper_roots == pytest.approx((1j,))
    assert roots_upper_half(-1, 2).upper_roots == pytest.approx((1j,))
    r = roots_upper_half(1, 3)
    assert r.real_root == pytest.approx(1.0)
    assert r.upper_roots == pytest.approx((cmath.exp(2j * math.pi / 3),))


@given(st.complex_numbers(min_magnitude=0.1, max_magnitude=10), st.integers(1, 7))
def test_roots_are_roots(c, k):
    r = roots_upper_half(c, k)
    allr = list(r.upper_roots) + list(r.lower_roots) + list(r.real_roots)
    for z in allr:
        assert abs(z ** k - c) <= 1e-10 * abs(c)
    assert all(z.imag > 0 for z in r.upper_roots)


def test_two_pole_residue_example():
    v = inner_integral_residues(1, 1j, 2j, 1.0)
    assert v == pytest.approx(2 * math.pi * (math.exp(-2) - math.exp(-1)), rel=1e-14)
    assert v.real == pytest.approx(-1.4612, abs=1e-4)
    q, _ = inner_integral_quadrature(1, 1j, 2j, 1.0)
    assert abs(v - q) <= 1e-4 * abs(v)


@pytest.mark.parametrize("A,R", [(0.05, 1e4), (0.02, 2e4)])
def test_small_A_matches_quadrature(A, R):
    v = inner_integral_residues(1, 1j, 2j, A)
    q, tail = inner_integral_quadrature(1, 1j, 2j, A, R=R)
    assert abs(v - q) <= 1e-4 * abs(v)


def test_double_pole_matches_quadrature():
    v = inner_integral_residues(1, 1j, 1j, 1.0)
    q, _ = inner_integral_quadrature(1, 1j, 1j, 1.0)
    assert abs(v - q) <= 1e-4 * abs(v)


upper = st.complex_numbers(min_magnitude=0.3, max_magnitude=3).filter(lambda z: abs(z.imag) > 0.1)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), upper, upper, st.floats(0.5, 3), st.floats(-3, 3))
def test_residues_match_quadrature(k, t1, s1, A, b):
    v = inner_integral_residues(k, t1, s1, A, b)
    q, tail = inner_integral_quadrature(k, t1, s1, A, b, R=1e3)
    assert abs(v - q) <= max(1e-4 * abs(v), 2 * tail)


def test_nonpositive_A_rejected():
    with pytest.raises(PreconditionViolation):
        inner_integral_residues(1, 1j, 2j, 0.0)


def test_semicircle_constant_h():
    assert semicircle_integral(lambda z: 1 / z, 0.0, 1.0) == pytest.approx(-math.pi * 1j, abs=1e-14)
    assert semicircle_correction_bound(0.0, 1.0, 1.0, 0.0) == 0.0


def test_semicircle_oscillating_h():
    r = 0.1
    err = abs(semicircle_integral(lambda z: np.exp(1j * z) / z, 0.0, r) + math.pi * 1j)
    hmax = halfdisk_max(lambda z: 1j * np.exp(1j * z), 0.0, r)
    bound = semicircle_correction_bound(0.0, r, 1.0, 1.0)
    assert bound == pytest.approx(0.1 * math.pi)
    assert hmax <= 1.0 + 1e-12
    assert err <= bound


@given(st.floats(1e-6, 1.0))
def test_semicircle_bound_linear_in_radius(r):
    assert semicircle_correction_bound(0.0, r, 1.0, 2.0) == pytest.approx(2 * math.pi * r)


@settings(max_examples=20, deadline=None)
@given(st.floats(-2, 2), st.floats(0.05, 0.5), st.floats(-2, 2))
def test_semicircle_lemma_on_meromorphic_functions(x0, r, w):
    # psi = e^{iwz} / (z - x0): h = e^{iwz}, |h'| <= |w| e^{|w| r}
    err = abs(semicircle_integral(lambda z: np.exp(1j * w * z) / (z - x0), x0, r) + math.pi * 1j * np.exp(1j * w * x0))
    hmax = halfdisk_max(lambda z: 1j * w * np.exp(1j * w * z), x0, r)
    assert err <= semicircle_correction_bound(x0, r, 1.0, hmax) + 1e-12


def test_vdc_examples():
    assert vdc_bound(2.0) == pytest.approx(8 * math.sqrt(math.pi) / math.sqrt(2), rel=1e-15)
    assert vdc_bound(2.0) == pytest.approx(10.027, abs=1e-3)
    assert math.sqrt(math.pi) <= vdc_bound(2.0)
    assert vdc_bound(64 * math.pi) == pytest.approx(1.0, rel=1e-15)
    with pytest.raises(PreconditionViolation):
        vdc_bound(0.0)


def test_fresnel_integral_respects_vdc():
    x, w = np.polynomial.legendre.leggauss(200)
    total = 0j
    for lo in np.arange(-30, 30, 0.5):
        xs = lo + 0.25 * (x + 1)
        total += 0.25 * np.sum(w * np.exp(1j * xs ** 2))
    assert abs(total) == pytest.approx(math.sqrt(math.pi), abs=0.05)
    assert abs(total) <= vdc_bound(2.0)


def test_oscillatory_empty_interval():
    assert oscillatory_exp_integral(1.3, 0.5, 0.0).value == 0


def test_oscillatory_exponential_integral_oracle():
    r = oscillatory_exp_integral(0.0, 2.0, 40.0, sign=-1)
    assert r.value == pytest.approx(0.5 * sp.exp1(1j), abs=1e-9)
    assert r.value.real == pytest.approx(-0.1687, abs=1e-4)
    assert r.value.imag == pytest.approx(-0.3124, abs=1e-4)


def test_oscillatory_segment_is_additive():
    a = oscillatory_exp_segment(-0.3, 0.5, 0.0, 3.0).value
    b = oscillatory_exp_segment(-0.3, 0.5, 3.0, 9.0).value
    c = oscillatory_exp_segment(-0.3, 0.5, 0.0, 9.0).value
    assert a + b == pytest.approx(c, abs=1e-10)


@settings(max_examples=12, deadline=None)
@given(st.sampled_from([0.5, 2 / 3, 2.0, 3.0]), st.floats(-1e3, 1e3), st.sampled_from([1, -1]))
def test_oscillatory_bounded_and_stable(alpha, b, sign):
    r1 = oscillatory_exp_integral(b, alpha, math.exp(8), sign)
    r2 = oscillatory_exp_integral(b, alpha, 2 * math.exp(8), sign)
    assert abs(r1.value) <= r1.a_priori_bound
    assert abs(r1.value - r2.value) < 1e-3


def test_near_stationary_set_is_short():
    for b in (-1.0, -1e-3, 0.5):
        ivs = near_stationary_intervals(b, 0.5, 1, 0.0, 200.0)
        assert len(ivs) <= 2
        assert sum(hi - lo for lo, hi in ivs) <= 50


@pytest.mark.parametrize("alpha,b,sign", [(0.5, -1.0, 1), (2.0, 0.3, -1), (3.0, -5.0, 1), (2 / 3, 1e-3, -1)])
def test_vdc_pieces_respect_bound(alpha, b, sign):
    for lo, hi, val, bound in vdc_pieces(b, alpha, sign, math.exp(8)):
        assert val <= bound


def test_a_priori_bound_positive():
    for a in (0.5, 2 / 3, 2.0, 3.0):
        assert oscillation_a_priori_bound(a) > 0
