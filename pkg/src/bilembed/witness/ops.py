"""Multipliers, anisotropic Sobolev products and the bilinear-embedding ratio."""

from __future__ import annotations

import warnings

import numpy as np

from ..errors import AliasRisk, DegenerateDenominator, PreconditionViolation, SizeMismatch
from ..params import BEParams
from .grid import GridFunction2D, Side, l1_norm, to_frequency, to_space

EDGE_BINS = 2
EDGE_FRACTION = 1e-8
DEGENERATE_L1 = 1e-12


def _pair(f, g):
    if not f.compatible(g):
        raise SizeMismatch("grid functions live on different grids")
    return to_frequency(f), to_frequency(g)


def edge_fraction(f: GridFunction2D, bins: int = EDGE_BINS) -> float:
    """Share of spectral energy within ``bins`` bins of the Nyquist frame."""
    a = np.abs(to_frequency(f).samples) ** 2
    total = a.sum()
    if total == 0:
        return 0.0
    inner = a[bins:-bins, bins:-bins].sum()
    return float((total - inner) / total)


def check_alias(f: GridFunction2D, where: str = "") -> float:
    frac = edge_fraction(f)
    if frac > EDGE_FRACTION:
        warnings.warn(f"{where}: spectral energy fraction {frac:.2e} near the Nyquist edge", AliasRisk, stacklevel=3)
    return frac


def weight(fh: GridFunction2D, alpha: float, beta: float):
    XI, ETA = fh.mesh()
    w = np.ones(XI.shape)
    if alpha:
        w = w * np.abs(XI) ** (2 * alpha)
    if beta:
        w = w * np.abs(ETA) ** (2 * beta)
    return w


def sobolev_product(f: GridFunction2D, g: GridFunction2D, alpha: float, beta: float) -> complex:
    """``sum fhat conj(ghat) |xi|^{2 alpha} |eta|^{2 beta} dxi deta``."""
    fh, gh = _pair(f, g)
    w = weight(fh, alpha, beta)
    return complex((fh.samples * np.conj(gh.samples) * w).sum() * fh.cell())


def symbol(fh: GridFunction2D, k: int, l: int, c: complex):
    """``(2 pi i xi)^k - c (2 pi i eta)^l`` on the frequency nodes."""
    XI, ETA = fh.mesh()
    return (2j * np.pi * XI) ** k - c * (2j * np.pi * ETA) ** l


def derivative_multiplier(fh: GridFunction2D, p: int, q: int):
    XI, ETA = fh.mesh()
    return (2j * np.pi * XI) ** p * (2j * np.pi * ETA) ** q


def multiply(f: GridFunction2D, m) -> GridFunction2D:
    fh = to_frequency(f)
    return fh.with_samples(fh.samples * m)


def apply_operator(f: GridFunction2D, k: int, l: int, c: complex) -> GridFunction2D:
    """``(d1^k - c d2^l) f`` returned on the space side."""
    fh = to_frequency(f)
    check_alias(fh, "apply_operator")
    return to_space(fh.with_samples(fh.samples * symbol(fh, k, l, c)))


def be_ratio(f: GridFunction2D, g: GridFunction2D, p: BEParams) -> float:
    num = abs(sobolev_product(f, g, p.alpha, p.beta))
    nf = l1_norm(apply_operator(f, p.k, p.l, p.tau))
    ng = l1_norm(apply_operator(g, p.k, p.l, p.sigma))
    if nf < DEGENERATE_L1 or ng < DEGENERATE_L1:
        raise DegenerateDenominator(f"operator images have L1 norms {nf:.3e}, {ng:.3e}")
    return num / (nf * ng)


def linear_ratio(f: GridFunction2D, p: BEParams, c: complex) -> float:
    """``||f||_{W^{alpha,beta}} / ||(d1^k - c d2^l) f||_{L1}``."""
    num = np.sqrt(max(sobolev_product(f, f, p.alpha, p.beta).real, 0.0))
    den = l1_norm(apply_operator(f, p.k, p.l, c))
    if den < DEGENERATE_L1:
        raise DegenerateDenominator(f"operator image has L1 norm {den:.3e}")
    return float(num / den)


def _rel(a, b):
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def derivation_identity_check(f, g, p_order: int, q_order: int, alpha: float, beta: float) -> float:
    """Relative gap between the weighted product of derivatives and the
    shifted-weight product of the functions."""
    fh, gh = _pair(f, g)
    m = derivative_multiplier(fh, p_order, q_order)
    lhs = sobolev_product(multiply(fh, m), multiply(gh, m), alpha, beta)
    rhs = (2 * np.pi) ** (2 * (p_order + q_order)) * sobolev_product(fh, gh, alpha + p_order, beta + q_order)
    return _rel(lhs, rhs)


def sign_combination_identity(f, g, p: BEParams) -> float:
    """Recover the pure-derivative products from the four mixed ones."""
    fh, gh = _pair(f, g)
    d1 = derivative_multiplier(fh, p.k, 0)
    d2 = derivative_multiplier(fh, 0, p.l)
    a, b = p.alpha, p.beta
    mixed = {}
    for s in (1, -1):
        for s2 in (1, -1):
            ff = multiply(fh, d1 - s * p.tau * d2)
            gg = multiply(gh, d1 - s2 * p.sigma * d2)
            mixed[s, s2] = sobolev_product(ff, gg, a, b)
    pure1 = sobolev_product(multiply(fh, d1), multiply(gh, d1), a, b)
    pure2 = sobolev_product(multiply(fh, d2), multiply(gh, d2), a, b)
    comb1 = 0.25 * sum(mixed.values())
    comb2 = sum(s * s2 * v for (s, s2), v in mixed.items()) / (4 * p.tau * np.conj(p.sigma))
    return max(_rel(pure1, comb1), _rel(pure2, comb2))


def _dft_matrix(nodes_out, nodes_in, sign):
    return np.exp(sign * 2j * np.pi * np.outer(nodes_out, nodes_in))


def anisotropic_rescale(f: GridFunction2D, lam: float, k: int, l: int) -> GridFunction2D:
    """Samples of ``f(lam^l x, lam^k y)`` on the same grid.

    Built on the frequency side: the transform of the rescaled function is
    ``lam^{-(k+l)} fhat(xi / lam^l, eta / lam^k)``, and ``fhat`` off the
    grid nodes comes from separable non-uniform Fourier sums over the space
    samples (exact when ``f`` vanishes outside the space window).
    """
    if lam <= 0:
        raise PreconditionViolation("lambda must be positive")
    fs = to_space(f)
    sx, sy = lam ** l, lam ** k
    probe = fs.with_samples(np.zeros(fs.samples.shape), Side.FREQUENCY)
    xi, eta = probe.xi(), probe.eta()
    ex = _dft_matrix(xi / sx, fs.x(), -1) * fs.dx
    ey = _dft_matrix(eta / sy, fs.y(), -1) * fs.dy
    # the space-sample sums are periodic in frequency; nodes whose preimage
    # lies outside the original box carry no content
    ex[np.abs(xi / sx - fs.xi0) > 0.5 * fs.n_x * probe.dxi, :] = 0
    ey[np.abs(eta / sy - fs.eta0) > 0.5 * fs.n_y * probe.deta, :] = 0
    vals = (ex @ fs.samples @ ey.T) / (sx * sy)
    out = probe.with_samples(vals)
    frac = edge_fraction(out)
    if frac > EDGE_FRACTION:
        warnings.warn(f"rescaled spectrum reaches the Nyquist edge (energy fraction {frac:.2e})", AliasRisk, stacklevel=2)
    return to_space(out) if f.side is Side.SPACE else out
