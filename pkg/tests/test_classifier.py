import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bilembed.acceptance import classifier_table
from bilembed.classifier import Basis, Status, classify
from bilembed.obstruction import obstruction_integral
from bilembed.params import BEParams, beta_on_line, reduce, unreduce

TWO_PI = 2 * math.pi


def verdict(*args):
    v = classify(BEParams(*args))
    return v.status, v.basis


def test_same_sign_imaginary_symbols_hold():
    assert verdict(1, 2, 0, 0.5, -1 / TWO_PI, 1 / TWO_PI) == (Status.HOLDS, Basis.THEOREM1)


def test_equal_non_elliptic_coefficients_fail():
    assert verdict(1, 2, 0, 0.5, 1j, 1j) == (Status.FAILS, Basis.LEMMA1)


@pytest.mark.parametrize("sigma,tau", [(1, 1), (1j, 2), (-3 + 1j, 0.5j)])
def test_off_line_fails(sigma, tau):
    assert verdict(1, 2, 0.25, 0.5, sigma, tau) == (Status.FAILS, Basis.HOMOGENEITY_LINE)


def test_real_distinct_reduced_symbols_hold_by_second_theorem():
    assert verdict(1, 2, 0, 0.5, -1j / TWO_PI, -1j / math.pi) == (Status.HOLDS, Basis.THEOREM2)


def test_equal_elliptic_coefficients_fail():
    assert verdict(1, 2, 0, 0.5, 1 / TWO_PI, 1 / TWO_PI) == (Status.FAILS, Basis.COROLLARY1)


def test_equal_orders_are_claimed():
    s, t = unreduce(3, 3, 1, 2)
    assert verdict(3, 3, 1, 1, s, t) == (Status.CLAIMED, Basis.REMARK_K_EQUALS_L)


def test_one_real_symbol_is_not_covered():
    s, t = unreduce(1, 2, 1, 1j)
    assert verdict(1, 2, 0, 0.5, s, t) == (Status.UNKNOWN, Basis.NOT_COVERED)


def test_curated_table():
    rows = classifier_table()
    assert len(rows) >= 40
    assert {basis for _, _, (_, basis) in rows} == set(Basis)
    for name, p, (status, basis) in rows:
        v = classify(p)
        assert (v.status, v.basis) == (status, basis), name


def test_record_fields():
    rec = classify(BEParams(1, 2, 0, 0.5, -1 / TWO_PI, 1 / TWO_PI)).to_record()
    assert {"status", "basis", "notes", "sigma1", "tau1", "elliptic", "on_line"} <= set(rec)
    assert rec["basis"] == "Theorem1"
    assert rec["sigma1"] == pytest.approx([0, 1], abs=1e-6)


upper = st.complex_numbers(min_magnitude=0.1, max_magnitude=10).filter(lambda z: abs(z.imag) > 1e-2)


@settings(max_examples=60, deadline=None)
@given(upper, upper)
def test_theorem1_verdict_matches_obstruction(s1, t1):
    sigma, tau = unreduce(1, 2, s1, t1)
    v = classify(BEParams(1, 2, 0, 0.5, sigma, tau))
    if v.basis is not Basis.THEOREM1:
        return
    val = abs(obstruction_integral(1, 2, 0, s1, t1).value)
    if v.status is Status.HOLDS:
        assert val <= 1e-8
    else:
        assert val > 1e-3


@settings(max_examples=60)
@given(st.sampled_from([(1, 2), (3, 2), (1, 3), (2, 4), (3, 4)]), upper)
def test_equal_elliptic_coefficients_always_fail(kl, c1):
    k, l = kl
    s, t = unreduce(k, l, c1, c1)
    p = BEParams(k, l, 0, beta_on_line(k, l, 0) if beta_on_line(k, l, 0) >= 0 else 0, s, s)
    v = classify(p)
    if reduce(p).elliptic and v.basis is not Basis.HOMOGENEITY_LINE:
        assert (v.status, v.basis) == (Status.FAILS, Basis.COROLLARY1)


@settings(max_examples=60)
@given(st.sampled_from(classifier_table()), st.floats(0.1, 10))
def test_branch_stable_under_degeneracy_preserving_scaling(row, r):
    _, p, _ = row
    q = BEParams(p.k, p.l, p.alpha, p.beta, r * p.sigma, r * p.tau)
    rp, rq = reduce(p), reduce(q)
    if (rp.sigma1_degenerate, rp.tau1_degenerate) != (rq.sigma1_degenerate, rq.tau1_degenerate):
        return
    # equality of symbols is scale invariant, so the branch must be too
    assert classify(p).basis == classify(q).basis


def test_classify_is_deterministic():
    p = BEParams(1, 2, 0, 0.5, -1 / TWO_PI, 1 / TWO_PI)
    assert classify(p) == classify(p)
