"""Knapp sequence concentrated along a real characteristic curve.

For a real reduced symbol ``sigma1`` the curve ``xi^k = sigma1 eta^l`` is
real, and ``f_n`` has spectrum in a curved ``1/n x 1/n^2`` rectangle along it.
Its squared L2 norm scales like ``n^{-3}``, while the operator image only
sees the ``1/n^2`` distance to the curve, so the linear ratio blows up.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from ..errors import PreconditionViolation
from ..params import BEParams, reduce
from .cutoffs import bump as default_bump
from .grid import GridFunction2D, from_spectrum, l1_norm, l2_norm_sq
from .ops import apply_operator, sobolev_product

KNAPP_SHAPE = (4096, 1024)
ZETA2_START = 3.0
ZETA_MIN = 2.0
KNAPP_EPSILON = 0.1


@dataclass(frozen=True)
class ExponentFit:
    slope: float
    intercept: float
    r_squared: float

    @classmethod
    def from_data(cls, ns, values) -> "ExponentFit":
        res = stats.linregress(np.log(np.asarray(ns, float)), np.log(np.asarray(values, float)))
        return cls(float(res.slope), float(res.intercept), float(res.rvalue ** 2))


def real_root(c, k: int):
    """Real ``k``-th root of a real ``c`` (``c >= 0`` when ``k`` is even)."""
    c = np.asarray(c, dtype=float)
    if k % 2 == 0 and np.any(c < 0):
        raise PreconditionViolation("even root of a negative number")
    return np.sign(c) * np.abs(c) ** (1.0 / k)


def base_point(k: int, l: int, sigma1: float, zeta2: float = ZETA2_START, max_steps: int = 10_000):
    """``(zeta1, zeta2)`` on the curve with both coordinates above 2 in size."""
    if k % 2 == 0 and sigma1 * zeta2 ** l < 0:
        raise PreconditionViolation("curve has no real point with eta > 0")
    for _ in range(max_steps):
        z1 = float(real_root(sigma1 * zeta2 ** l, k))
        if abs(z1) > ZETA_MIN:
            return z1, zeta2
        zeta2 += 1.0
    raise PreconditionViolation("no base point with |zeta1| > 2 found")


def _real_sigma1(p: BEParams) -> float:
    r = reduce(p)
    if not r.sigma1_degenerate:
        raise PreconditionViolation("Knapp sequence needs a real characteristic curve for sigma")
    return float(r.sigma1.real)


def knapp_extent(k, l, sigma1, zeta, n):
    """Half-widths of the support of ``f_n`` around ``zeta``."""
    z1, z2 = zeta
    half_eta = 0.5 / n
    etas = np.linspace(z2 - half_eta, z2 + half_eta, 257)
    half_xi = np.abs(real_root(sigma1 * etas ** l, k) - z1).max() + 0.5 / n ** 2
    return min(half_xi, 1.0), half_eta


def knapp_sequence(p: BEParams, n: int, bump=default_bump, shape=KNAPP_SHAPE) -> GridFunction2D:
    """Frequency-side ``f_n`` on a grid centred at the base point.

    ``f_n^(xi, eta) = phi(n (eta - zeta2)) phi(n^2 (xi - (sigma1 eta^l)^{1/k}))``
    on the unit box around ``zeta``; the grid spacings put the support inside
    half of the Nyquist box.
    """
    if int(n) != n or n < 2:
        raise PreconditionViolation("n must be an integer >= 2")
    k, l = p.k, p.l
    s1 = _real_sigma1(p)
    z1, z2 = base_point(k, l, s1)
    hx, hy = knapp_extent(k, l, s1, (z1, z2), n)
    n_x, n_y = shape

    def spec(xi, eta):
        box = (np.abs(xi - z1) <= 1) & (np.abs(eta - z2) <= 1)
        curve = real_root(s1 * np.abs(eta) ** l * np.sign(eta) ** l, k)
        return np.where(box, bump(n * (eta - z2)) * bump(n * n * (xi - curve)), 0.0)

    return from_spectrum(spec, n_x, n_y, 4 * hx / n_x, 4 * hy / n_y, xi0=z1, eta0=z2)


@dataclass
class KnappReport:
    ns: np.ndarray
    l2_sq: np.ndarray
    image_l1: np.ndarray
    linear_ratio: np.ndarray
    l2_fit: ExponentFit
    l1_fit: ExponentFit
    linear_ratio_fit: ExponentFit
    zeta: tuple

    def rows(self):
        for i, n in enumerate(self.ns):
            yield {"n": int(n), "l2_sq": float(self.l2_sq[i]), "image_l1": float(self.image_l1[i]),
                   "linear_ratio": float(self.linear_ratio[i])}


def knapp_measure(p: BEParams, n: int, bump=default_bump, shape=KNAPP_SHAPE):
    """``(||f_n||_2^2, ||(d1^k - sigma d2^l) f_n||_1, linear ratio)``."""
    f = knapp_sequence(p, n, bump, shape)
    l2 = l2_norm_sq(f)
    l1 = l1_norm(apply_operator(f, p.k, p.l, p.sigma))
    w = sobolev_product(f, f, p.alpha, p.beta).real
    return l2, l1, float(np.sqrt(max(w, 0.0)) / l1)


def knapp_report(p: BEParams, ns=(4, 8, 16, 32), bump=default_bump, shape=KNAPP_SHAPE) -> KnappReport:
    ns = np.asarray(ns, dtype=int)
    if ns.size < 4 or ns.max() < 8 * ns.min():
        raise PreconditionViolation("need at least 4 values of n spanning a factor 8")
    data = np.array([knapp_measure(p, int(n), bump, shape) for n in ns])
    s1 = _real_sigma1(p)
    return KnappReport(ns, data[:, 0], data[:, 1], data[:, 2], ExponentFit.from_data(ns, data[:, 0]),
                       ExponentFit.from_data(ns, data[:, 1]), ExponentFit.from_data(ns, data[:, 2]),
                       base_point(p.k, p.l, s1))


def knapp_exponent_fit(p: BEParams, ns=(4, 8, 16, 32), bump=default_bump, shape=KNAPP_SHAPE):
    r = knapp_report(p, ns, bump, shape)
    return r.l2_fit, r.l1_fit, r.linear_ratio_fit
