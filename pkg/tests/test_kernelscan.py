import io
import math

import numpy as np
import pytest
from scipy import integrate

from bilembed.errors import PreconditionViolation
from bilembed.kernelscan import (
    KernelScanConfig, Path, excision_constant, excision_g, excision_integral, reduced_kernel_elliptic,
    reduced_kernel_elliptic_direct, reduced_kernel_nonelliptic, reduced_kernel_nonelliptic_direct,
    scan_uniform_bound,
)

A0 = 1 / (2 * math.pi)


def test_empty_domain_elliptic():
    assert reduced_kernel_elliptic(1, 2, 1j, 2j, 0.3, 0.5, 0.5) == 0


def test_empty_domain_nonelliptic():
    assert complex(reduced_kernel_nonelliptic(1, 2, 1, 2, A0, 0.0, 0.1, 0.1)) == 0


def test_elliptic_example_is_finite():
    v = reduced_kernel_elliptic(1, 2, 1j, 2j, 0.0, 1e-3, 1e3)
    assert np.isfinite(v)
    assert abs(v) <= 10


@pytest.mark.parametrize("cfg", [
    (1, 2, 1j, 2j, 0.5, 0.05, 8.0),
    (3, 2, 1 + 1j, -1 + 2j, -1.0, 0.1, 5.0),
])
def test_elliptic_matches_direct_quadrature(cfg):
    k, l, s1, t1, b, e, R = cfg
    v = reduced_kernel_elliptic(k, l, s1, t1, b, e, R)
    d = reduced_kernel_elliptic_direct(k, l, s1, t1, b, e, R)
    assert abs(v - d) <= 1e-2 * abs(d)


def test_nonelliptic_matches_direct_quadrature():
    r = reduced_kernel_nonelliptic(1, 2, 1, 2, A0, 0.0, 0.1, 10.0)
    d = reduced_kernel_nonelliptic_direct(1, 2, 1, 2, A0, 0.0, 0.1, 10.0, tol=1e-8)
    assert abs(r.value - d) <= 1e-6 * abs(d)


def test_nonelliptic_splits_and_certifies():
    r = reduced_kernel_nonelliptic(1, 2, 1, 2, A0, 0.0, 0.1, math.exp(8))
    assert np.isfinite(complex(r))
    assert r.value == pytest.approx(r.residue_part + r.semi_residue_part + r.error_part, abs=1e-12)
    assert r.certified


def test_nonelliptic_preconditions():
    with pytest.raises(PreconditionViolation):
        reduced_kernel_nonelliptic(1, 2, 1, 1, A0, 0.0, 0.1, 10.0)
    with pytest.raises(PreconditionViolation):
        reduced_kernel_nonelliptic(1, 2, 1j, 2, A0, 0.0, 0.1, 10.0)
    with pytest.raises(PreconditionViolation):
        reduced_kernel_nonelliptic(1, 2, 1, 2, A0, 0.0, 1.5, 10.0)


def test_excision_g_below_power():
    for l in (1, 2, 3, 4):
        z = np.geomspace(1e-6, 1e3, 5000)
        assert np.all(excision_g(z, l) / z ** l <= 1 + 1e-12)


def test_excision_constant_l1():
    assert excision_constant(1) == pytest.approx(math.e ** 2 / 4, rel=1e-15)


@pytest.mark.parametrize("k,l", [(1, 2), (3, 2), (1, 3)])
def test_excision_integral_finite_and_closed_form(k, l):
    num, _ = integrate.quad(lambda z: (1 + z ** (l / k)) * z ** (-l) * excision_g(z, l) / z, 0, np.inf)
    assert excision_integral(k, l) == pytest.approx(num, rel=1e-8)


def test_degenerate_scan_grid_has_zero_sup():
    cfg = KernelScanConfig(1, 2, 1j, 2j, (1.0,), (1.0,), (0.0, 1.0))
    rep = scan_uniform_bound(cfg, Path.ELLIPTIC)
    assert rep.sup_abs == 0


def test_elliptic_same_sign_scan_stabilizes():
    cfg = KernelScanConfig(1, 2, 1j, 2j, (1e-3, 1e-2, 1e-1), (10.0, 100.0, 1000.0),
                           tuple(np.concatenate([-np.logspace(-2, 3, 5), np.logspace(-2, 3, 5)])))
    rep = scan_uniform_bound(cfg, Path.ELLIPTIC)
    assert rep.stabilized
    assert np.all(np.diff(rep.sup_by_R) >= 0)
    assert not rep.errors


def test_scan_sup_monotone_per_point():
    cfg = KernelScanConfig(3, 2, 1 + 1j, -1 + 2j, (1e-2,), (2.0, 20.0, 200.0), (0.5, -3.0))
    rep = scan_uniform_bound(cfg, Path.ELLIPTIC)
    a = np.abs(rep.values)
    running = np.maximum.accumulate(a, axis=1)
    assert np.all(np.diff(running, axis=1) >= 0)
    assert rep.sup_abs == pytest.approx(a.max())


def test_nonelliptic_scan_certificate():
    cfg = KernelScanConfig(1, 2, 1, 2, (1e-2, 1e-1), (10.0, 100.0), (0.0, 2.0, -2.0))
    rep = scan_uniform_bound(cfg, Path.NON_ELLIPTIC)
    assert rep.certified
    assert not rep.errors


def test_report_csv_schema():
    cfg = KernelScanConfig(1, 2, 1j, 2j, (0.1,), (10.0,), (0.0, 1.0))
    rep = scan_uniform_bound(cfg, Path.ELLIPTIC)
    buf = io.StringIO()
    rep.to_csv(buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "epsilon,R,b,re,im,abs"
    assert len(lines) == 3
    e, R, b, re, im, ab = map(float, lines[1].split(","))
    assert ab == pytest.approx(math.hypot(re, im))


def test_scan_config_validation():
    with pytest.raises(PreconditionViolation):
        KernelScanConfig(1, 2, 1j, 2j, (), (1.0,), (0.0,))
    with pytest.raises(PreconditionViolation):
        KernelScanConfig(1, 2, 1j, 2j, (0.1,), (1.0,), (0.0,), a=0.0)
    cfg = KernelScanConfig(1, 2, 1, 2, (0.1,), (1.0,), (0.0,), a=3.0)
    with pytest.raises(PreconditionViolation):
        cfg.validate_for(Path.NON_ELLIPTIC)


def test_thread_override_gives_same_values(monkeypatch):
    cfg = KernelScanConfig(1, 2, 1j, 2j, (0.1,), (10.0, 100.0), (0.0, 1.0, -1.0))
    monkeypatch.setenv("BILEMBED_THREADS", "1")
    a = scan_uniform_bound(cfg, Path.ELLIPTIC).values
    monkeypatch.setenv("BILEMBED_THREADS", "3")
    b = scan_uniform_bound(cfg, Path.ELLIPTIC).values
    assert np.array_equal(a, b)
