"""The reduced convolution kernel and uniform-boundedness scans.

Elliptic case::

    K(b, eps, R) = int_eps^R eta^-1 int_R rho^(k-1) e^{i(rho eta^(l/k) + b eta)} d rho d eta
                                     / ((rho^k - tau1)(rho^k - sigma1))

with the inner integral from upper residues. In the non-elliptic case
(real distinct reduced symbols, ``k`` odd) the real poles are excised by
small intervals whose size is driven by the function ``g`` below, and the
value splits into a residue part, a semi-residue part and an error part;
the error part carries a certificate that is linear in ``eps``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma as gamma_fn

from ._quad import gauss_legendre, gl_panels, phase_panels
from .contour import oscillatory_exp_segment, residue_terms, roots_upper_half
from .errors import BilembedError, PreconditionViolation

DECAY_CUT = 80.0
STABLE_TOL = 1e-3
_CHUNK = 2048


class Path(str, enum.Enum):
    ELLIPTIC = "Elliptic"
    NON_ELLIPTIC = "NonElliptic"


# ---------------------------------------------------------------------------
# shared eta quadrature


def _eta_breaks(lo, hi, rate):
    """Panels on ``[lo, hi]``: log-spaced below 1, phase-sized above."""
    if hi <= lo:
        return np.array([lo, hi])
    parts = []
    if lo < 1:
        top = min(hi, 1.0)
        n = max(1, int(math.ceil(math.log(top / lo) / 0.5)))
        parts.append(np.geomspace(lo, top, n + 1))
    if hi > 1:
        start = max(lo, 1.0)
        parts.append(phase_panels(start, hi, rate, max_width=0.5, log_width=0.5, per_panel=3 * math.pi))
    br = np.unique(np.concatenate(parts))
    return br


def _cumulative(f, points, rate, n=20):
    """``int_{points[0]}^{points[i]} f`` for every ``i`` (points sorted)."""
    out = [0j]
    acc = 0j
    for lo, hi in zip(points[:-1], points[1:]):
        if hi > lo:
            acc += complex(gl_panels(f, _eta_breaks(lo, hi, rate), n=n))
        out.append(acc)
    return np.array(out)


def _residue_eta_integrand(k, l, tau1, sigma1, b):
    """``eta -> eta^-1 (2 pi i e^{i b eta} sum coef e^{i r A})`` with ``A = eta^(l/k)``."""
    kind, terms = residue_terms(k, tau1, sigma1)
    coefs = np.array([c for c, _ in terms], dtype=complex)
    roots = np.array([r for _, r in terms], dtype=complex)
    p = l / k

    def f(eta):
        A = eta ** p
        e = np.exp(1j * A[..., None] * roots)
        if kind == "double":
            e = e * (1j * A[..., None])
        s = (e * coefs).sum(axis=-1)
        return 2j * math.pi * np.exp(1j * b * eta) * s / eta

    if roots.size:
        min_im = float(np.min(roots.imag))
        cut = (DECAY_CUT / min_im) ** (1 / p) if min_im > 0 else math.inf
        max_re = float(np.max(np.abs(roots.real)))
    else:
        cut, max_re = 0.0, 0.0

    def rate(eta):
        return abs(b) + max_re * p * eta ** (p - 1) + 1.0

    return f, rate, cut


def _residue_grid(k, l, tau1, sigma1, b, eps_list, R_list, lower_scale=1.0):
    """``int_{lower_scale eps}^R`` of the residue integrand on the (eps, R) grid."""
    f, rate, cut = _residue_eta_integrand(k, l, tau1, sigma1, b)
    lows = [lower_scale * e for e in eps_list]
    pts = sorted({min(x, cut) for x in lows + list(R_list)})
    pts = [p for p in pts if p > 0]
    if not pts:
        return np.zeros((len(eps_list), len(R_list)), dtype=complex)
    C = dict(zip(pts, _cumulative(f, pts, rate)))
    out = np.zeros((len(eps_list), len(R_list)), dtype=complex)
    for i, lo in enumerate(lows):
        for j, R in enumerate(R_list):
            if R > lo:
                out[i, j] = C[min(R, cut)] - C[min(lo, cut)]
    return out


# ---------------------------------------------------------------------------
# elliptic kernel


def _check_elliptic(tau1, sigma1):
    for c in (tau1, sigma1):
        if abs(complex(c).imag) <= 1e-12 * max(1.0, abs(c)):
            raise PreconditionViolation(f"symbol {c} is real; the elliptic kernel needs nonreal symbols")


def elliptic_kernel_grid(k, l, sigma1, tau1, b, eps_list, R_list):
    """Elliptic kernel on an (eps, R) grid for one ``b``; entries with ``eps >= R`` are 0."""
    _check_elliptic(tau1, sigma1)
    if min(eps_list) <= 0:
        raise PreconditionViolation("epsilon must be positive")
    return _residue_grid(k, l, complex(tau1), complex(sigma1), float(b), list(eps_list), list(R_list))


def reduced_kernel_elliptic(k, l, sigma1, tau1, b, epsilon, R) -> complex:
    """``K(b, eps, R)`` in the elliptic case."""
    if R < epsilon:
        raise PreconditionViolation("need epsilon <= R")
    if R == epsilon:
        _check_elliptic(tau1, sigma1)
        return 0j
    return complex(elliptic_kernel_grid(k, l, sigma1, tau1, b, [epsilon], [R])[0, 0])


def reduced_kernel_elliptic_direct(k, l, sigma1, tau1, b, epsilon, R, rho_max=1e3, n=20):
    """Coarse oracle: the inner integral by direct quadrature at Gauss nodes in ``eta``."""
    from .contour import inner_integral_quadrature

    _check_elliptic(tau1, sigma1)
    _, rate, cut = _residue_eta_integrand(k, l, complex(tau1), complex(sigma1), float(b))
    hi = min(R, cut)
    if hi <= epsilon:
        return 0j
    br = _eta_breaks(epsilon, hi, rate)
    x, w = gauss_legendre(n)
    total = 0j
    for lo, up in zip(br[:-1], br[1:]):
        half, mid = 0.5 * (up - lo), 0.5 * (up + lo)
        for xi, wi in zip(x, w):
            eta = mid + half * xi
            val, _ = inner_integral_quadrature(k, tau1, sigma1, eta ** (l / k), b * eta, R=rho_max, tol=1e-9)
            total += wi * half * val / eta
    return total


# ---------------------------------------------------------------------------
# excision and the non-elliptic kernel


def excision_constant(l: int) -> float:
    """``c_l = ((l + 1)/e)^-(l + 1)``, the largest constant with ``c_l z^(l+1) e^-z <= 1``."""
    return ((l + 1) / math.e) ** (-(l + 1))


def excision_g(z, l: int):
    """``g(z) = c_l z^(2l+1) e^-z``; satisfies ``g(z) <= z^l`` for all ``z > 0``."""
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise PreconditionViolation("z must be positive")
    out = excision_constant(l) * z ** (2 * l + 1) * np.exp(-z)
    return float(out) if out.ndim == 0 else out


def excision_integral(k: int, l: int) -> float:
    """``int_0^inf (1 + z^(l/k)) z^-l g(z) dz / z = c_l (Gamma(l+1) + Gamma(l + l/k + 1))``."""
    return excision_constant(l) * (gamma_fn(l + 1) + gamma_fn(l + l / k + 1))


@dataclass(frozen=True)
class NonEllipticKernel:
    value: complex
    residue_part: complex
    semi_residue_part: complex
    error_part: complex
    certificate: float
    linear_bound: float
    h_constant: float

    def __complex__(self):
        return complex(self.value)

    @property
    def certified(self) -> bool:
        return abs(self.error_part) <= self.certificate <= self.linear_bound


def _check_nonelliptic(k, l, sigma1, tau1, a, epsilon):
    if k == l or (k % 2 == 0 and l % 2 == 0):
        raise PreconditionViolation("need k != l and one odd order")
    if k % 2 == 0:
        raise PreconditionViolation("the excision path is written for odd k; transpose the tuple first")
    s, t = complex(sigma1), complex(tau1)
    for c in (s, t):
        if abs(c.imag) > 1e-12 * max(1.0, abs(c)) or c == 0:
            raise PreconditionViolation(f"symbol {c} must be real and nonzero")
    if abs(s - t) <= 1e-12 * max(abs(s), abs(t)):
        raise PreconditionViolation("reduced symbols must be distinct")
    if not 0 < a < 2:
        raise PreconditionViolation("need 0 < a < 2")
    if not 0 < epsilon < 1:
        raise PreconditionViolation("need 0 < epsilon < 1")
    return s.real, t.real


class _PoleData:
    """The real pole ``x`` of the factor ``rho^k - own`` with the rest written out:
    ``psi = e^{i(rho A + b eta)} q(rho) / (rho - x)``."""

    def __init__(self, k, own, other):
        self.k = k
        self.own = own
        self.other = other
        self.x = roots_upper_half(own, k).real_root
        # psi near x: rho^(k-1) / ((rho^k - other) P(rho)), P = (rho^k - x^k)/(rho - x)
        self.residue_coef = 1.0 / (k * (own - other))

    def _P(self, z):
        k, x = self.k, self.x
        return sum(z ** (k - 1 - m) * x ** m for m in range(k))

    def _dP(self, z):
        k, x = self.k, self.x
        return sum((k - 1 - m) * z ** (k - 2 - m) * x ** m for m in range(k - 1))

    def q(self, z):
        return z ** (self.k - 1) / ((z ** self.k - self.other) * self._P(z))

    def dq(self, z):
        k = self.k
        lg = -k * z ** (k - 1) / (z ** k - self.other) - self._dP(z) / self._P(z)
        if k > 1:
            lg = lg + (k - 1) / z
        return self.q(z) * lg

    def psi1_factory(self, A, phase):
        """``(h(z) - h(x))/(z - x)`` with ``h = (z - x) psi``, written to avoid cancellation."""
        x, qx = self.x, self.q(self.x)

        def psi1(z):
            w = z - x
            ex = np.exp(1j * (x * A + phase))
            qz = self.q(z)
            return ex * (np.expm1(1j * w * A) * qz + (qz - qx)) / w

        return psi1

    def hprime_factory(self, A, phase):
        def hp(z):
            return np.exp(1j * (z * A + phase)) * (1j * A * self.q(z) + self.dq(z))
        return hp

    def singular_distance(self):
        """Distance from ``x`` to the nearest other singularity of ``psi``."""
        others = [r for r in np.roots([1] + [0] * (self.k - 1) + [-self.other])]
        others += [r for r in np.roots([1] + [0] * (self.k - 1) + [-self.own]) if abs(r - self.x) > 1e-9]
        return min(abs(r - self.x) for r in others)


def _error_integrand(k, l, poles, a, b, epsilon, n_semi=10, n_circle=256):
    """Per-``eta`` error density, certificate density and the ratio behind ``H``.

    On the half-disk ``|h'| = |e^{i(zA + b eta)}| |iA q + q'| <= A max|q| + max|q'|``;
    both maxima are taken once over the largest excision disk (radius
    ``eps / (k |x|^(k-1))`` since ``g(z) <= z^l``) by the maximum modulus principle.
    """
    scale = (2 * math.pi * a) ** (-k / l)
    gx, gw = gauss_legendre(n_semi)
    ring = np.exp(0.5j * math.pi * (gx + 1))[None, :]
    circle = np.exp(2j * math.pi * np.arange(n_circle) / n_circle)
    maxima = []
    for p in poles:
        r_max = epsilon / (k * abs(p.x) ** (k - 1))
        if r_max >= 0.25 * p.singular_distance():
            raise PreconditionViolation("excision radius reaches another singularity")
        zc = p.x + r_max * circle
        # sampled boundary maxima, padded for the sampling gap
        maxima.append((1.01 * float(np.abs(p.q(zc)).max()), 1.01 * float(np.abs(p.dq(zc)).max())))

    def densities(eta):
        eta = np.asarray(eta, dtype=float).ravel()
        z_o = scale * eta
        delta = epsilon * z_o ** (-l) * excision_g(z_o, l)
        A1 = eta ** (l / k)
        err = np.zeros(eta.shape, dtype=complex)
        cert = np.zeros(eta.shape)
        hden = np.zeros(eta.shape)
        for p, (q0, q1) in zip(poles, maxima):
            r = delta / (k * abs(p.x) ** (k - 1))
            psi1 = p.psi1_factory(A1[:, None], (b * eta)[:, None])
            z = p.x + r[:, None] * ring
            dz = 1j * r[:, None] * ring
            # clockwise semicircle integral of psi1 equals int psi + pi i Res
            err += -(psi1(z) * dz * gw[None, :]).sum(axis=1) * 0.5 * math.pi
            m = A1 * q0 + q1
            cert += math.pi * r * m
            hden += math.pi * m / (k * abs(p.x) ** (k - 1))
        return -err / eta, cert / eta, hden / np.maximum(1.0, A1)

    # past z_cut the density is below 1e-15 of its scale
    pw = l + 1 + l / k
    z_cut = float(pw + 1)
    while excision_constant(l) * z_cut ** pw * math.exp(-z_cut) > 1e-15:
        z_cut += 1.0
    return densities, z_cut / scale


def _error_grid(k, l, poles, a, b, epsilon, R_list, n=20):
    """Error part, certificate and constant H for each ``R``."""
    dens, eta_cut = _error_integrand(k, l, poles, a, b, epsilon)
    lo = (2 * math.pi * a) ** (k / l) * epsilon
    max_x = max(abs(p.x) for p in poles)

    def rate(eta):
        return abs(b) + max_x * (l / k) * eta ** (l / k - 1) + 1.0

    pts = sorted({lo} | {min(max(R, lo), eta_cut) for R in R_list})
    x, w = gauss_legendre(n)
    acc_e, acc_c, H = 0j, 0.0, 0.0
    cum = {pts[0]: (0j, 0.0)}
    for p0, p1 in zip(pts[:-1], pts[1:]):
        br = _eta_breaks(p0, p1, rate)
        half = 0.5 * np.diff(br)
        nodes = (0.5 * (br[:-1] + br[1:]))[:, None] + half[:, None] * x[None, :]
        nodes = nodes.ravel()
        wt = (half[:, None] * w[None, :]).ravel()
        for c0 in range(0, nodes.size, _CHUNK):
            e_d, c_d, h_d = dens(nodes[c0:c0 + _CHUNK])
            acc_e += complex(np.sum(wt[c0:c0 + _CHUNK] * e_d))
            acc_c += float(np.sum(wt[c0:c0 + _CHUNK] * c_d))
            H = max(H, float(np.max(h_d)))
        cum[p1] = (acc_e, acc_c)
    out = []
    for R in R_list:
        key = min(max(R, lo), eta_cut)
        out.append(cum[key])
    return out, H


def nonelliptic_kernel_grid(k, l, sigma1, tau1, a, b, epsilon, R_list):
    """Non-elliptic kernel for one ``(a, b, eps)`` and several ``R``."""
    s, t = _check_nonelliptic(k, l, sigma1, tau1, a, epsilon)
    lo = (2 * math.pi * a) ** (k / l) * epsilon
    p_sigma, p_tau = _PoleData(k, s, t), _PoleData(k, t, s)
    res = _residue_grid(k, l, complex(t), complex(s), float(b), [lo], list(R_list))[0] if k > 1 else \
        np.zeros(len(R_list), dtype=complex)
    errs, H = _error_grid(k, l, (p_sigma, p_tau), a, b, epsilon, R_list)
    K = excision_integral(k, l)
    lin = epsilon * H * max(1.0, 2 * math.pi * a) * K
    alpha = l / k
    out = []
    for j, R in enumerate(R_list):
        if R <= lo:
            out.append(NonEllipticKernel(0j, 0j, 0j, 0j, 0.0, lin, H))
            continue
        semi = 0j
        for c, sgn in ((p_sigma.x, 1), (p_tau.x, -1)):
            m = abs(c) ** (k / l)
            seg = oscillatory_exp_segment(b / m, alpha, math.log(lo * m), math.log(R * m), 1 if c > 0 else -1)
            semi += sgn * seg.value
        semi *= 1j * math.pi / (k * (s - t))
        e_part, cert = errs[j]
        total = complex(res[j]) + semi + e_part
        out.append(NonEllipticKernel(total, complex(res[j]), semi, e_part, cert, lin, H))
    return out


def reduced_kernel_nonelliptic(k, l, sigma1, tau1, a, b, epsilon, R) -> NonEllipticKernel:
    """Excised kernel with its residue / semi-residue / error split."""
    return nonelliptic_kernel_grid(k, l, sigma1, tau1, a, b, epsilon, [R])[0]


def reduced_kernel_nonelliptic_direct(k, l, sigma1, tau1, a, b, epsilon, R, level_set=False, n=20, tol=1e-10):
    """Coarse oracle: direct quadrature of the excised double integral.

    The inner integral runs over ``[-L, L]`` minus the excised intervals; the
    two tails beyond ``L`` are taken along vertical rays in the upper half-plane.
    ``level_set=True`` excises ``{|rho^k - s| <= delta}`` instead of the
    symmetric intervals used by :func:`reduced_kernel_nonelliptic`.
    """
    from ._quad import gk_adaptive

    s, t = _check_nonelliptic(k, l, sigma1, tau1, a, epsilon)
    lo = (2 * math.pi * a) ** (k / l) * epsilon
    if R <= lo:
        return 0j
    scale = (2 * math.pi * a) ** (-k / l)
    poles = [_PoleData(k, s, t), _PoleData(k, t, s)]
    max_x = max(abs(p.x) for p in poles)

    def psi(rho, A, ph):
        rk = rho ** k
        return rho ** (k - 1) * np.exp(1j * (rho * A + ph)) / ((rk - t) * (rk - s))

    def inner(eta):
        A, ph = eta ** (l / k), b * eta
        z_o = scale * eta
        delta = epsilon * z_o ** (-l) * excision_g(z_o, l)
        cuts = []
        for p in poles:
            if level_set:
                lo_x = math.copysign(abs(p.own - delta) ** (1 / k), p.own - delta)
                hi_x = math.copysign(abs(p.own + delta) ** (1 / k), p.own + delta)
            else:
                r = delta / (k * abs(p.x) ** (k - 1))
                lo_x, hi_x = p.x - r, p.x + r
            cuts.append((lo_x, hi_x))
        L = 4 * max_x + 4
        step = min(0.5, 3 * math.pi / A)
        edges = sorted([-L, L] + [e for c in cuts for e in c])
        gaps = set(range(1, len(edges) - 1, 2))  # the odd gaps are the excised pieces
        val = 0j
        for i, (e0, e1) in enumerate(zip(edges[:-1], edges[1:])):
            if i in gaps:
                continue
            m = max(1, int(math.ceil((e1 - e0) / step)))
            br = np.linspace(e0, e1, m + 1)
            v, _ = gk_adaptive(lambda x: psi(x, A, ph), br, abstol=tol, reltol=1e-12)
            val += v
        # |rho| > L: all poles lie inside |rho| < L, so each tail moves onto the
        # vertical ray +-L + iu, where the phase factor decays like e^{-A u}
        u_br = np.concatenate([[0.0], np.geomspace(1e-3 / A, 50.0 / A, 41)])
        for sgn in (1, -1):
            v, _ = gk_adaptive(lambda u: 1j * psi(sgn * L + 1j * u, A, ph), u_br, abstol=tol, reltol=1e-12)
            val += sgn * v
        return val

    _, rate, _ = _residue_eta_integrand(k, l, complex(t), complex(s), float(b))

    def rate2(eta):
        return rate(eta) + max_x * (l / k) * eta ** (l / k - 1)

    br = _eta_breaks(lo, R, rate2)
    x, w = gauss_legendre(n)
    total = 0j
    for e0, e1 in zip(br[:-1], br[1:]):
        half, mid = 0.5 * (e1 - e0), 0.5 * (e1 + e0)
        for xi, wi in zip(x, w):
            eta = mid + half * xi
            total += wi * half * inner(eta) / eta
    return total


# ---------------------------------------------------------------------------
# scans


@dataclass(frozen=True)
class KernelScanConfig:
    k: int
    l: int
    sigma1: complex
    tau1: complex
    epsilon_grid: tuple
    R_grid: tuple
    b_grid: tuple
    a: float = 1 / (2 * math.pi)

    def __post_init__(self):
        for name in ("epsilon_grid", "R_grid", "b_grid"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))
        if not self.epsilon_grid or not self.R_grid or not self.b_grid:
            raise PreconditionViolation("grids must be nonempty")
        if min(self.epsilon_grid) <= 0 or min(self.R_grid) <= 0:
            raise PreconditionViolation("epsilon and R must be positive")
        if self.a <= 0:
            raise PreconditionViolation("a must be positive (a = 0 is a null set and never sampled)")

    def validate_for(self, path: "Path"):
        path = Path(path)
        if path is Path.NON_ELLIPTIC:
            if not self.a < 2 or not max(self.epsilon_grid) < 1:
                raise PreconditionViolation("the excision path needs a < 2 and epsilon < 1")


@dataclass
class KernelGridReport:
    values: np.ndarray
    sup_abs: float
    argmax: tuple
    stabilized: bool
    config: KernelScanConfig
    path: Path
    sup_doubled: float = 0.0
    errors: list = field(default_factory=list)
    error_part: np.ndarray | None = None
    certificate: np.ndarray | None = None
    linear_bound: np.ndarray | None = None

    @property
    def sup_by_R(self) -> np.ndarray:
        """Running sup over the first ``j + 1`` radii."""
        a = np.abs(self.values)
        per_R = np.nanmax(a, axis=(0, 2)) if a.size else np.zeros(0)
        return np.maximum.accumulate(np.nan_to_num(per_R, nan=0.0))

    @property
    def certified(self) -> bool | None:
        if self.error_part is None:
            return None
        ok = (np.abs(self.error_part) <= self.certificate) & (self.certificate <= self.linear_bound)
        return bool(np.all(ok[np.isfinite(self.certificate)]))

    def rows(self):
        c = self.config
        for i, e in enumerate(c.epsilon_grid):
            for j, R in enumerate(c.R_grid):
                for m, b in enumerate(c.b_grid):
                    v = complex(self.values[i, j, m])
                    yield e, R, b, v.real, v.imag, abs(v)

    def to_csv(self, fh):
        """Write ``epsilon,R,b,re,im,abs`` rows to an open text file."""
        import csv

        w = csv.writer(fh)
        w.writerow(["epsilon", "R", "b", "re", "im", "abs"])
        for row in self.rows():
            w.writerow([repr(float(x)) for x in row])


def _threads():
    import os

    default = os.cpu_count() or 1
    try:
        return max(1, int(os.environ.get("BILEMBED_THREADS", default)))
    except ValueError:
        return default


def _scan_b(config, path, b, R_list):
    """All (eps, R) values for one ``b``; failures are returned, not raised."""
    c = config
    ne, nR = len(c.epsilon_grid), len(R_list)
    vals = np.full((ne, nR), np.nan + 0j)
    extra = np.full((3, ne, nR), np.nan)
    extra_e = np.full((ne, nR), np.nan + 0j)
    errs = []
    if path is Path.ELLIPTIC:
        try:
            g = elliptic_kernel_grid(c.k, c.l, c.sigma1, c.tau1, b, c.epsilon_grid, R_list)
            for i, e in enumerate(c.epsilon_grid):
                for j, R in enumerate(R_list):
                    vals[i, j] = g[i, j] if R > e else 0j
        except BilembedError as exc:
            errs.append((None, None, b, repr(exc)))
        return vals, extra_e, extra, errs
    for i, e in enumerate(c.epsilon_grid):
        try:
            out = nonelliptic_kernel_grid(c.k, c.l, c.sigma1, c.tau1, c.a, b, e, R_list)
        except BilembedError as exc:
            errs.append((e, None, b, repr(exc)))
            continue
        for j, (R, r) in enumerate(zip(R_list, out)):
            vals[i, j] = r.value if R > e else 0j
            extra_e[i, j] = r.error_part
            extra[:, i, j] = (r.certificate, r.linear_bound, r.h_constant)
    return vals, extra_e, extra, errs


def scan_uniform_bound(config: KernelScanConfig, path: Path) -> KernelGridReport:
    """Kernel on the (eps, R, b) grid with sup, argmax and a stabilization flag.

    The flag compares the sup with the sup over the grid extended by twice the
    largest ``R``.
    """
    path = Path(path)
    config.validate_for(path)
    R_ext = list(config.R_grid) + [2 * max(config.R_grid)]
    bs = list(config.b_grid)
    nt = _threads()
    if nt > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(nt) as ex:
            parts = list(ex.map(lambda b: _scan_b(config, path, b, R_ext), bs))
    else:
        parts = [_scan_b(config, path, b, R_ext) for b in bs]
    full = np.stack([p[0] for p in parts], axis=-1)
    values = full[:, :-1, :]
    errors = [e for p in parts for e in p[3]]
    absv = np.abs(values)
    if np.all(np.isnan(absv)):
        sup, arg = math.nan, ()
    else:
        flat = int(np.nanargmax(absv))
        arg = tuple(int(v) for v in np.unravel_index(flat, absv.shape))
        sup = float(absv[arg])
    sup_ext = float(np.nanmax(np.abs(full))) if not np.all(np.isnan(np.abs(full))) else math.nan
    if sup == 0:
        stabilized = sup_ext == 0
    else:
        stabilized = bool(abs(sup_ext - sup) / sup < STABLE_TOL)
    rep = KernelGridReport(values, sup, arg, stabilized, config, path, sup_ext, errors)
    if path is Path.NON_ELLIPTIC:
        rep.error_part = np.stack([p[1] for p in parts], axis=-1)[:, :-1, :]
        ex = np.stack([p[2] for p in parts], axis=-1)[:, :, :-1, :]
        rep.certificate, rep.linear_bound = ex[0], ex[1]
    return rep
