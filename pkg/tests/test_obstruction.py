import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bilembed.errors import PreconditionViolation
from bilembed.obstruction import (
    CaseTag, Convention, Parity, case_of, delta_branch, obstruction_by_quadrature, obstruction_integral,
    obstruction_quadrature_oracle, phi_function,
)


def test_same_sign_odd_critical_vanishes():
    r = obstruction_integral(1, 2, 0, 1j, 2j)
    assert r.case_tag is CaseTag.ODD_CRITICAL
    assert abs(r.value) <= 1e-12


def test_opposite_sign_odd_critical_is_pi():
    assert obstruction_integral(1, 2, 0, -1j, 1j).value == pytest.approx(math.pi, rel=1e-12)


def test_even_critical_partial_fractions_give_log2():
    r = obstruction_integral(2, 2, 0.5, -1, -2)
    assert abs(r.value) == pytest.approx(math.log(2), rel=1e-10)
    assert r.value == pytest.approx(obstruction_quadrature_oracle(2, 0.5, -1, -2), rel=1e-8)


def test_oracle_examples():
    assert obstruction_quadrature_oracle(1, 0, -1j, 1j, R_max=1e6, tol=1e-8) == pytest.approx(math.pi, abs=1e-8)
    assert abs(obstruction_quadrature_oracle(1, 0, 1j, 2j, R_max=1e6, tol=1e-8)) <= 1e-8
    assert abs(obstruction_quadrature_oracle(2, 0.5, -2, -2)) == pytest.approx(0.5, rel=1e-8)


def test_equal_even_critical_closed_form_matches_oracle():
    closed = obstruction_integral(2, 2, 0.5, -2, -2).value
    assert closed == pytest.approx(obstruction_quadrature_oracle(2, 0.5, -2, -2), rel=1e-8)


@pytest.mark.parametrize("gamma", [-0.5, 0.0, 0.3, 0.7])
def test_delta_normalization_points(gamma):
    assert delta_branch(-1, gamma, Convention.CUT_ON_POSITIVE_AXIS) == pytest.approx(1, abs=1e-14)
    assert delta_branch(1, gamma, Convention.CUT_ON_NEGATIVE_AXIS) == pytest.approx(1, abs=1e-14)


@given(st.complex_numbers(min_magnitude=0.1, max_magnitude=10).filter(lambda z: abs(z.imag) > 1e-3),
       st.floats(0.1, 10), st.floats(-0.9, 0.9), st.sampled_from(list(Convention)))
def test_delta_is_homogeneous(z, lam, gamma, conv):
    assert delta_branch(lam * z, gamma, conv) == pytest.approx(lam ** gamma * delta_branch(z, gamma, conv), rel=1e-12)


def test_phi_even_normalization():
    assert phi_function(-1, -0.5, Parity.EVEN) == pytest.approx(math.pi, rel=1e-9)


@pytest.mark.parametrize("gamma", [-0.6, -0.2, 0.4])
def test_phi_odd_symmetries(gamma):
    z = 0.3 + 0.8j
    assert phi_function(-z, gamma, Parity.ODD) == pytest.approx(-phi_function(z, gamma, Parity.ODD), rel=1e-10)
    assert phi_function(2j, gamma, Parity.ODD) == pytest.approx(2 ** gamma * phi_function(1j, gamma, Parity.ODD),
                                                                rel=1e-10)


def test_phi_odd_is_injective_on_a_sample(rng):
    z = rng.uniform(-3, 3, 100) + 1j * rng.uniform(0.1, 3, 100)
    vals = np.array([phi_function(complex(w), 0.4, Parity.ODD) for w in z])
    gaps = np.abs(vals[:, None] - vals[None, :])
    assert np.min(gaps + np.eye(100)) > 1e-6


def test_even_k_with_odd_l_is_rejected():
    with pytest.raises(PreconditionViolation):
        obstruction_integral(2, 3, 0.5, -1, -2)


def test_real_symbol_for_odd_k_is_rejected():
    with pytest.raises(PreconditionViolation):
        obstruction_integral(1, 2, 0, 1, 1j)


arg_upper = st.complex_numbers(min_magnitude=0.2, max_magnitude=5).filter(lambda z: abs(z.imag) > 0.05)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(1, 2, 0.0), (1, 2, 0.2), (3, 2, 1.0), (3, 2, 0.4), (5, 2, 2.0)]), arg_upper, arg_upper)
def test_closed_form_matches_oracle_odd(case, s1, t1):
    k, l, alpha = case
    a = obstruction_integral(k, l, alpha, s1, t1).value
    b = obstruction_by_quadrature(k, l, alpha, s1, t1).value
    assert abs(a - b) <= 1e-6 * max(abs(a), 1.0)


off_ray = st.complex_numbers(min_magnitude=0.2, max_magnitude=5).filter(
    lambda z: abs(z.imag) > 0.05 or z.real < -0.05)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(2, 2, 0.5), (2, 4, 0.2), (4, 2, 1.5), (4, 4, 0.8)]), off_ray, off_ray)
def test_closed_form_matches_oracle_even(case, s1, t1):
    k, l, alpha = case
    a = obstruction_integral(k, l, alpha, s1, t1).value
    b = obstruction_by_quadrature(k, l, alpha, s1, t1).value
    assert abs(a - b) <= 1e-6 * max(abs(a), 1.0)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([(1, 0.2), (3, 1.0), (2, 0.5), (2, 0.2)]), arg_upper, arg_upper, st.floats(0.2, 5))
def test_homogeneity_in_symbols(case, s1, t1, lam):
    k, alpha = case
    l = 2
    r1 = obstruction_integral(k, l, alpha, s1, t1)
    r2 = obstruction_integral(k, l, alpha, lam * s1, lam * t1)
    if abs(r1.value) < 1e-12:
        assert abs(r2.value) < 1e-12
    else:
        assert r2.value == pytest.approx(lam ** (r1.gamma - 1) * r1.value, rel=1e-8)


@given(arg_upper, arg_upper)
def test_vanishing_iff_same_sign(s1, t1):
    v = abs(obstruction_integral(1, 2, 0, s1, t1).value)
    if s1.imag * t1.imag > 0:
        assert v <= 1e-8
    else:
        assert v >= 1e-3


def test_case_tags():
    assert case_of(1, 0, 1j, 2j) is CaseTag.ODD_CRITICAL
    assert case_of(1, 0.2, 1j, 2j) is CaseTag.ODD_NONCRITICAL
    assert case_of(1, 0.2, 1j, 1j) is CaseTag.ODD_NONCRITICAL_EQUAL
    assert case_of(2, 0.5, -1, -2) is CaseTag.EVEN_CRITICAL
    assert case_of(2, 0.5, -2, -2) is CaseTag.EVEN_CRITICAL_EQUAL
    assert case_of(2, 0.2, -1, -2) is CaseTag.EVEN_SUBCRITICAL
