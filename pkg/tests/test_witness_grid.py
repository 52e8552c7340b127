import io
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bilembed import gridio
from bilembed.errors import AliasRisk, SizeMismatch, WrongSide
from bilembed.witness import (
    GridFunction2D, Side, forward_transform, from_function, from_spectrum, inverse_transform, l1_norm, l2_norm_sq,
)


def gauss(n=512, d=1 / 16, **kw):
    return from_function(lambda x, y: np.exp(-np.pi * (x * x + y * y)), n, n, d, d, **kw)


def test_gaussian_is_self_dual():
    f = gauss()
    F = forward_transform(f)
    XI, ETA = F.mesh()
    assert np.max(np.abs(F.samples - np.exp(-np.pi * (XI ** 2 + ETA ** 2)))) <= 1e-10


def test_round_trip():
    f = gauss(128, 1 / 8)
    back = inverse_transform(forward_transform(f))
    assert back.side is Side.SPACE
    assert np.max(np.abs(back.samples - f.samples)) <= 1e-13


def test_shift_theorem():
    a, b = 0.375, -0.5
    f = from_function(lambda x, y: np.exp(-np.pi * ((x - a) ** 2 + (y - b) ** 2)), 256, 256, 1 / 16, 1 / 16)
    F = forward_transform(f)
    XI, ETA = F.mesh()
    want = np.exp(-2j * np.pi * (a * XI + b * ETA)) * np.exp(-np.pi * (XI ** 2 + ETA ** 2))
    assert np.max(np.abs(F.samples - want)) <= 1e-10


def test_carrier_grid_transform():
    xi0, eta0 = 3.0, -2.0
    f = from_function(lambda x, y: np.exp(2j * np.pi * (xi0 * x + eta0 * y)) * np.exp(-np.pi * (x * x + y * y)),
                      256, 256, 1 / 8, 1 / 8, xi0=xi0, eta0=eta0)
    F = forward_transform(f)
    XI, ETA = F.mesh()
    assert np.max(np.abs(F.samples - np.exp(-np.pi * ((XI - xi0) ** 2 + (ETA - eta0) ** 2)))) <= 1e-10


def test_parseval(rng):
    n = 128
    spec = np.zeros((n, n), complex)
    spec[40:88, 40:88] = rng.normal(size=(48, 48)) + 1j * rng.normal(size=(48, 48))
    f = from_spectrum(lambda a, b: 0 * a, n, n, 1 / 8, 1 / 8).with_samples(spec)
    assert l2_norm_sq(inverse_transform(f)) == pytest.approx(l2_norm_sq(f), rel=1e-12)


def test_gaussian_l1_is_one():
    assert l1_norm(gauss()) == pytest.approx(1.0, rel=1e-10)


@pytest.mark.parametrize("lam,k,l", [(0.5, 1, 2), (1.5, 1, 2), (0.8, 3, 2)])
def test_l1_scaling(lam, k, l):
    f = from_function(lambda x, y: np.exp(-np.pi * ((lam ** l * x) ** 2 + (lam ** k * y) ** 2)), 512, 512,
                      1 / 16, 1 / 16)
    assert l1_norm(f) == pytest.approx(lam ** (-(k + l)), rel=1e-8)


def test_indicator_like_area():
    from bilembed.witness.cutoffs import Cutoff

    c = Cutoff(inner=0.98, outer=1.0)
    f = from_function(lambda x, y: c(np.abs(x) / 2.0) * c(np.abs(y) / 1.5), 512, 512, 1 / 64, 1 / 64)
    # the transition band is symmetric about r = 0.99
    assert l1_norm(f) == pytest.approx(4.0 * 3.0 * 0.99 ** 2, rel=1e-3)


def test_l1_needs_space_side():
    with pytest.raises(WrongSide):
        l1_norm(forward_transform(gauss(64, 1 / 4)))


def test_grids_are_immutable_and_power_of_two():
    f = gauss(64, 1 / 4)
    with pytest.raises(ValueError):
        f.samples[0, 0] = 1
    with pytest.raises(SizeMismatch):
        GridFunction2D(np.zeros((60, 64)), 0.1, 0.1)


def test_adding_incompatible_grids_fails():
    with pytest.raises(SizeMismatch):
        gauss(64, 1 / 4) + gauss(64, 1 / 8)


def test_binary_round_trip(tmp_path):
    f = from_function(lambda x, y: np.exp(-np.pi * (x * x + y * y)) * (1 + 1j * x), 64, 32, 1 / 4, 1 / 8,
                      x0=0.5, y0=-0.25, xi0=1.0, eta0=2.0)
    path = tmp_path / "f.begf"
    gridio.save(f, path)
    g = gridio.load(path)
    assert np.array_equal(g.samples, f.samples)
    assert (g.dx, g.dy, g.x0, g.y0, g.xi0, g.eta0, g.side) == (f.dx, f.dy, f.x0, f.y0, f.xi0, f.eta0, f.side)
    assert len(path.read_bytes()) == 72 + 16 * 64 * 32


def test_binary_rejects_garbage():
    with pytest.raises(SizeMismatch):
        gridio.from_bytes(b"nope" + bytes(100))


def test_csv_round_trip():
    f = forward_transform(gauss(16, 1 / 2))
    buf = io.StringIO()
    gridio.write_csv(f, buf)
    buf.seek(0)
    g = gridio.read_csv(buf)
    assert g.side is Side.FREQUENCY
    assert np.array_equal(g.samples, f.samples)
    assert "i,j,re,im" in buf.getvalue().splitlines()


@settings(max_examples=25, deadline=None)
@given(st.floats(-1, 1), st.floats(-1, 1), st.floats(0.7, 1.5))
def test_round_trip_property(a, b, w):
    f = from_function(lambda x, y: np.exp(-np.pi * w * ((x - a) ** 2 + (y - b) ** 2)) * (1 + 1j * y), 64, 64,
                      1 / 6, 1 / 6)
    back = inverse_transform(forward_transform(f))
    assert np.max(np.abs(back.samples - f.samples)) <= 1e-12
    assert l2_norm_sq(forward_transform(f)) == pytest.approx(l2_norm_sq(f), rel=1e-12)
