"""Elliptic counterexample family ``V = psi_t - psi``.

``psi(xi, eta) = phi(sqrt(xi^{2k} + eta^{2l}))`` and ``psi_t`` is its
anisotropic dilation ``psi(xi / t^l, eta / t^k)``. With
``F^ = V / ((2 pi i xi)^k - tau (2 pi i eta)^l)`` and ``G^`` likewise for
``sigma``, both ``F`` and ``G`` are mapped to ``h = V-check`` by their
operators, ``||h||_1`` stays bounded in ``t`` and ``<F, G>`` moves affinely in
``log t`` with slope proportional to the obstruction integral.

Two engines are provided. :func:`elliptic_witness_pair` builds everything
on one Cartesian grid, which is only possible while ``psi_t`` and the
transition layer of ``psi`` fit together (small ``t``). The sweep uses
:func:`gauge_product` and :func:`h_l1_norm`, which treat the two scales
separately and agree with the grid engine where both apply.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .._quad import gk_adaptive
from ..errors import PreconditionViolation
from ..obstruction import obstruction_integral
from ..params import BEParams, reduce
from .cutoffs import Cutoff
from .grid import from_spectrum, inverse_transform, l1_norm
from .ops import sobolev_product

DEFAULT_CUTOFF = Cutoff()


def gauge_radius(xi, eta, k, l):
    return np.sqrt(np.abs(xi) ** (2 * k) + np.abs(eta) ** (2 * l))


def psi(xi, eta, k, l, cutoff=DEFAULT_CUTOFF, t=1.0):
    return cutoff(gauge_radius(xi, eta, k, l) / t ** (k * l))


def _require_elliptic(p: BEParams):
    r = reduce(p)
    if not r.elliptic:
        raise PreconditionViolation("witness pair needs elliptic symbols (division by the symbol is singular)")
    return r


def _spectral_box(k, l, t, cutoff):
    """Half-widths of the support of ``psi_t``."""
    return t ** l * cutoff.outer ** (1.0 / k), t ** k * cutoff.outer ** (1.0 / l)


def elliptic_witness_pair(p: BEParams, t: float, bump: Cutoff = DEFAULT_CUTOFF, n: int = 1024, n_y: int | None = None):
    """``(F, G, h)`` on one grid whose half Nyquist box holds ``supp psi_t``.

    ``F`` and ``G`` are returned on the frequency side, ``h`` on the space side.
    """
    if t <= 1:
        raise PreconditionViolation("t must exceed 1")
    _require_elliptic(p)
    n_y = n if n_y is None else n_y
    bx, by = _spectral_box(p.k, p.l, t, bump)
    dxi, deta = 4 * bx / n, 4 * by / n_y
    k, l = p.k, p.l
    V = from_spectrum(lambda a, b: psi(a, b, k, l, bump, t) - psi(a, b, k, l, bump), n, n_y, dxi, deta)
    XI, ETA = V.mesh()
    zero = gauge_radius(XI, ETA, k, l) <= bump.flat_radius
    d_tau = (2j * np.pi * XI) ** k - p.tau * (2j * np.pi * ETA) ** l
    d_sigma = (2j * np.pi * XI) ** k - p.sigma * (2j * np.pi * ETA) ** l
    vs = np.where(zero, 0.0, V.samples)
    with np.errstate(divide="ignore", invalid="ignore"):
        F = np.where(zero, 0.0, vs / d_tau)
        G = np.where(zero, 0.0, vs / d_sigma)
    return V.with_samples(F), V.with_samples(G), inverse_transform(V.with_samples(vs))


def _level_profile(cutoff, T):
    """``v(w) = phi(w / T) - phi(w)`` and the support of ``v``."""
    return (lambda w: cutoff(w / T) - cutoff(w)), cutoff.flat_radius, T * cutoff.outer


def gauge_product(p: BEParams, t: float, cutoff: Cutoff = DEFAULT_CUTOFF, rho_max: float = 1e6,
                  dy: float = 0.005, tol: float = 1e-10):
    """``<F, G>_{W^{alpha,beta}}`` for the pair at dilation ``t``.

    In the coordinates ``xi = rho |eta|^{l/k}``, ``eta = s e^y`` the weight and
    both symbols factor, and the product becomes
    ``(2 pi)^{-2k} sum_s int d rho |rho|^{2 alpha} / ((rho^k - s^l tau1)(rho^k - s^l sigma1))
    int dy v(e^{l y} sqrt(rho^{2k} + 1))^2`` exactly (on the homogeneity line).
    The inner integral is a trapezoid sum (``v`` is smooth and compactly
    supported); the outer uses ``rho = tan u`` with adaptive Gauss-Kronrod.
    Returns ``(value, error_estimate)``.
    """
    r = _require_elliptic(p)
    k, l, a = p.k, p.l, p.alpha
    if 2 * a >= 2 * k - 1:
        raise PreconditionViolation("alpha too large for the gauge integral to converge")
    v, w_lo, w_hi = _level_profile(cutoff, t ** (k * l))
    if w_lo <= 0:
        raise PreconditionViolation("cutoff must be identically 1 near the origin")
    c_max = np.sqrt(rho_max ** (2 * k) + 1)
    y = np.arange((np.log(w_lo) - np.log(c_max)) / l - dy, np.log(w_hi) / l + dy, dy)
    ey = np.exp(l * y)

    def inner(rho):
        c = np.sqrt(np.abs(rho) ** (2 * k) + 1)
        out = np.empty(rho.shape)
        for i in range(0, rho.size, 512):
            vv = v(c[i:i + 512, None] * ey[None, :])
            out[i:i + 512] = (vv * vv).sum(axis=1) * dy
        return out

    u_max = np.arctan(rho_max)
    w_total = float(inner(np.zeros(1))[0])
    total, err = 0j, 0.0
    for s in (1, -1):
        ts, ss = r.tau1 * s ** l, r.sigma1 * s ** l
        roots = np.concatenate([np.roots([1] + [0] * (k - 1) + [-c]) for c in (ts, ss)])
        breaks = np.unique(np.clip(np.concatenate([[-u_max, 0.0, u_max], np.arctan(roots.real)]), -u_max, u_max))

        def f(u, ts=ts, ss=ss):
            rho = np.tan(u)
            jac = 1.0 / np.cos(u) ** 2
            rk = rho ** k
            return np.abs(rho) ** (2 * a) * inner(rho) * jac / ((rk - ts) * (rk - ss))

        val, e = gk_adaptive(f, breaks, abstol=1e-14, reltol=tol)
        total += val
        err += e

        # |rho| > rho_max through q = 1/rho; there the y-integral is its
        # translation-invariant value w_total
        def g(q, ts=ts, ss=ss):
            qk = q ** k
            return np.abs(q) ** (2 * k - 2 - 2 * a) / ((1 - ts * qk) * (1 - ss * qk))

        val, e = gk_adaptive(g, [-1 / rho_max, 0.0, 1 / rho_max], abstol=1e-16, reltol=tol)
        total += w_total * val
        err += w_total * e
    scale = (2 * np.pi) ** (-2 * k)
    return complex(scale * total), float(scale * err)


def level_integral(cutoff: Cutoff, T: float, l: int, dy: float = 0.005) -> float:
    """``int dy v(e^{l y})^2`` for the profile at dilation ``T``."""
    v, w_lo, w_hi = _level_profile(cutoff, T)
    y = np.arange(np.log(w_lo) / l - dy, np.log(w_hi) / l + dy, dy)
    vv = v(np.exp(l * y))
    return float((vv * vv).sum() * dy)


def predicted_product(p: BEParams, t: float, cutoff: Cutoff = DEFAULT_CUTOFF) -> complex:
    """Closed-form counterpart of :func:`gauge_product` via the obstruction integral."""
    r = _require_elliptic(p)
    k, l = p.k, p.l
    total = sum(obstruction_integral(k, l, p.alpha, r.sigma1 * s ** l, r.tau1 * s ** l).value for s in (1, -1))
    return complex((2 * np.pi) ** (-2 * k) * total * level_integral(cutoff, t ** (k * l), l))


def _cos_matrix(nodes, freqs, step):
    return np.cos(2 * np.pi * np.outer(nodes, freqs)) * step


def h_l1_norm(p: BEParams, t: float, cutoff: Cutoff = DEFAULT_CUTOFF, n: int = 1024) -> float:
    """``||h||_1`` for ``h = (psi_t - psi)-check`` by scale separation.

    With ``Psi = psi-check`` one has ``h = A - Psi``, ``A(x, y) = t^{k+l} Psi(t^l x, t^k y)``.
    ``A`` is negligible outside a box ``Q`` the size of its own grid window, so
    ``||h||_1 = int_Q |A - Psi| + ||Psi||_1 - int_Q |Psi|``. Both integrals over
    ``Q`` are taken in the stretched variables where ``A`` is ``Psi``; the
    compressed copy of ``Psi`` comes from exact Fourier sums over the
    samples of ``psi`` (which is even in each variable).
    """
    _require_elliptic(p)
    k, l = p.k, p.l
    bx, by = _spectral_box(k, l, 1.0, cutoff)
    spec = from_spectrum(lambda a, b: psi(a, b, k, l, cutoff), n, n, 4 * bx / n, 4 * by / n)
    space = inverse_transform(spec)
    big = space.samples.real
    cell = space.dx * space.dy
    X, Y = space.x(), space.y()
    cx = _cos_matrix(X / t ** l, spec.xi(), spec.dxi)
    cy = _cos_matrix(Y / t ** k, spec.eta(), spec.deta)
    small = (cx @ spec.samples.real @ cy.T) / t ** (k + l)
    psi_l1 = np.abs(big).sum() * cell
    return float(np.abs(big - small).sum() * cell + psi_l1 - np.abs(small).sum() * cell)


@dataclass
class EllipticSweep:
    ts: np.ndarray
    products: np.ndarray
    product_errors: np.ndarray
    predicted: np.ndarray
    h_l1: np.ndarray
    fit: object = field(repr=False, default=None)

    @property
    def abs_products(self):
        return np.abs(self.products)

    @property
    def h_ratio(self) -> float:
        return float(self.h_l1.max() / self.h_l1.min())

    @property
    def product_ratio(self) -> float:
        a = self.abs_products
        return float(a.max() / a.min()) if a.min() > 0 else float("inf")

    def rows(self):
        for i, t in enumerate(self.ts):
            yield {"t": float(t), "log_t": float(np.log(t)), "abs_product": float(self.abs_products[i]),
                   "product_re": float(self.products[i].real), "product_im": float(self.products[i].imag),
                   "product_error": float(self.product_errors[i]), "predicted_abs": float(abs(self.predicted[i])),
                   "h_l1": float(self.h_l1[i])}


def elliptic_sweep(p: BEParams, ts=tuple(2.0 ** np.arange(4, 11)), cutoff: Cutoff = DEFAULT_CUTOFF,
                   n: int = 1024) -> EllipticSweep:
    """Sweep ``t``: products, their closed-form prediction, ``||h||_1`` and a
    least-squares fit of ``|<F, G>|`` against ``log t``."""
    ts = np.asarray(ts, dtype=float)
    prods, errs = zip(*(gauge_product(p, t, cutoff) for t in ts))
    prods = np.array(prods)
    pred = np.array([predicted_product(p, t, cutoff) for t in ts])
    hl = np.array([h_l1_norm(p, t, cutoff, n) for t in ts])
    fit = stats.linregress(np.log(ts), np.abs(prods))
    return EllipticSweep(ts, prods, np.array(errs), pred, hl, fit)


def grid_product(p: BEParams, t: float, cutoff: Cutoff = DEFAULT_CUTOFF, n: int = 1024):
    """Single-grid ``(<F, G>, ||h||_1)``, usable for small ``t``."""
    F, G, h = elliptic_witness_pair(p, t, cutoff, n)
    return sobolev_product(F, G, p.alpha, p.beta), l1_norm(h)


__all__ = [
    "EllipticSweep", "elliptic_sweep", "elliptic_witness_pair", "gauge_product", "grid_product",
    "h_l1_norm", "level_integral", "predicted_product", "psi",
]
