import math

import numpy as np
import pytest

from bilembed.acceptance import reduced
from bilembed.classifier import Basis, Status, classify
from bilembed.errors import PreconditionViolation
from bilembed.params import BEParams
from bilembed.witness import (
    Cutoff, CutoffKind, apply_operator, bump, elliptic_witness_pair, gauge_product, grid_product, h_l1_norm,
    knapp_sequence, l1_norm, l2_norm_sq, predicted_product,
)
from bilembed.witness.elliptic import gauge_radius
from bilembed.witness.knapp import KNAPP_EPSILON, base_point, knapp_measure

FAILS = reduced(1, 2, 0.0, 0.5, -1j, 2j)
HOLDS = reduced(1, 2, 0.0, 0.5, 1j, 2j)
KNAPP = reduced(1, 2, 0.0, 0.5, 0.25, 1j)


def test_configs_classify_as_intended():
    assert (classify(FAILS).status, classify(FAILS).basis) == (Status.FAILS, Basis.THEOREM1)
    assert (classify(HOLDS).status, classify(HOLDS).basis) == (Status.HOLDS, Basis.THEOREM1)


def test_bump_profile():
    assert bump(0.0) == pytest.approx(1.0)
    assert bump(0.5) == 0 and bump(-0.7) == 0
    x = np.linspace(-0.49, 0.49, 99)
    assert np.all(bump(x) > 0)


def test_plateau_is_flat_near_zero():
    c = Cutoff()
    r = np.linspace(0, c.inner, 50)
    assert np.all(c(r) == 1.0)
    assert c(1.0) == 0.0
    assert Cutoff(CutoffKind.BUMP).flat_radius == 0.0


def test_witness_vanishes_near_origin():
    F, G, h = elliptic_witness_pair(FAILS, 2.0, n=256)
    XI, ETA = F.mesh()
    ball = gauge_radius(XI, ETA, 1, 2) <= Cutoff().flat_radius
    assert ball.sum() > 10
    assert np.all(F.samples[ball] == 0) and np.all(G.samples[ball] == 0)


def test_witness_division_is_consistent():
    F, G, h = elliptic_witness_pair(FAILS, 2.0, n=256)
    from bilembed.witness.grid import to_frequency
    from bilembed.witness.ops import symbol

    V = to_frequency(h)
    assert np.allclose(F.samples * symbol(F, 1, 2, FAILS.tau), V.samples, atol=1e-12)
    assert np.allclose(G.samples * symbol(G, 1, 2, FAILS.sigma), V.samples, atol=1e-12)


def test_witness_needs_elliptic_symbols():
    with pytest.raises(PreconditionViolation):
        elliptic_witness_pair(KNAPP, 2.0, n=64)
    with pytest.raises(PreconditionViolation):
        elliptic_witness_pair(FAILS, 1.0, n=64)


def test_gauge_product_matches_single_grid():
    g, _ = gauge_product(FAILS, 2.0)
    s, hl = grid_product(FAILS, 2.0)
    assert abs(g - s) <= 1e-3 * abs(g)
    assert h_l1_norm(FAILS, 2.0) == pytest.approx(hl, rel=1e-2)


def test_product_follows_prediction():
    for t in (16.0, 128.0):
        g, err = gauge_product(FAILS, t)
        assert g == pytest.approx(predicted_product(FAILS, t), rel=1e-6)


def test_holds_product_vanishes():
    for t in (16.0, 1024.0):
        g, _ = gauge_product(HOLDS, t)
        assert abs(g) <= 1e-12


def test_h_l1_bounded_in_t():
    vals = [h_l1_norm(FAILS, t) for t in (16.0, 1024.0)]
    assert max(vals) / min(vals) <= 2


def test_knapp_base_point():
    assert base_point(1, 2, 0.25) == (2.25, 3.0)
    z1, z2 = base_point(1, 2, 0.1)
    assert abs(z1) > 2 and z2 > 3


def test_knapp_support_in_curved_rectangle():
    n = 8
    f = knapp_sequence(KNAPP, n)
    XI, ETA = f.mesh()
    z1, z2 = base_point(1, 2, 0.25)
    on = np.abs(f.samples) > 0
    assert on.any()
    assert np.all(np.abs(ETA[on] - z2) < 0.5 / n)
    assert np.all(np.abs(XI[on] - 0.25 * ETA[on] ** 2) < 0.5 / n ** 2)


def test_knapp_l2_norm():
    n = 8
    from scipy import integrate

    phi2 = integrate.quad(lambda x: float(bump(x)) ** 2, -0.5, 0.5)[0]
    assert l2_norm_sq(knapp_sequence(KNAPP, n)) == pytest.approx(n ** -3 * phi2 ** 2, rel=0.02)


def test_knapp_image_l1_bound():
    vals = {n: knapp_measure(KNAPP, n)[1] for n in (4, 16)}
    c = vals[4] * 4 ** (2 - 2 * KNAPP_EPSILON)
    assert vals[16] <= c * 16 ** (-2 + 2 * KNAPP_EPSILON)


def test_knapp_needs_real_curve():
    with pytest.raises(PreconditionViolation):
        knapp_sequence(FAILS, 8)
