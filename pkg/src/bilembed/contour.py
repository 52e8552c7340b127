"""Residue calculus and certified oscillatory quadrature.

* roots of ``rho^k = c`` split by half-plane,
* the inner integral ``int rho^(k-1) e^{i(rho A + b)} / ((rho^k - tau1)(rho^k - sigma1)) d rho``
  from upper residues, with a direct quadrature oracle,
* the semicircle (Sokhotski-Plemelj) bound and the Van der Corput bound,
* ``int e^{i(b e^x +- e^{alpha x})} dx`` with an a-priori bound.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from ._quad import gauss_legendre, gk_adaptive, gl_panels, phase_panels
from .errors import NonConvergent, PreconditionViolation

ROOT_TOL = 1e-12
EQUAL_TOL = 1e-9


@dataclass(frozen=True)
class RootSet:
    symbol: complex
    order: int
    upper_roots: tuple
    real_root: float | None = None
    real_roots: tuple = ()
    lower_roots: tuple = ()


def roots_upper_half(c: complex, k: int, tol: float = ROOT_TOL) -> RootSet:
    """All ``k``-th roots of ``c`` sorted by principal argument and split by half-plane."""
    c = complex(c)
    if c == 0:
        raise PreconditionViolation("c must be nonzero")
    k = int(k)
    mod = abs(c) ** (1.0 / k)
    ph = cmath.phase(c)
    roots = [mod * cmath.exp(1j * (ph + 2 * math.pi * j) / k) for j in range(k)]
    roots.sort(key=cmath.phase)
    upper, lower, real = [], [], []
    for r in roots:
        if abs(r.imag) <= tol * mod * 10:
            real.append(r.real)
        elif r.imag > 0:
            upper.append(r)
        else:
            lower.append(r)
    # the unique real root of an odd power of a real number
    real_root = None
    if k % 2 == 1 and abs(c.imag) <= tol * abs(c):
        real_root = math.copysign(abs(c.real) ** (1.0 / k), c.real)
        real = [real_root]
    return RootSet(c, k, tuple(upper), real_root, tuple(sorted(real)), tuple(lower))


def _require_nonreal(*cs):
    for c in cs:
        if abs(complex(c).imag) <= ROOT_TOL * max(1.0, abs(c)):
            raise PreconditionViolation(f"symbol {c} is real; use the excision path")


def residue_terms(k, tau1, sigma1):
    """Coefficient/root pairs with ``inner = 2 pi i e^{ib} sum coef e^{i root A}``.

    For ``sigma1 == tau1`` the double-pole terms are returned as ``(coef, root)``
    with the coefficient multiplying ``i A e^{i root A}`` instead.
    """
    tau1, sigma1 = complex(tau1), complex(sigma1)
    if abs(tau1 - sigma1) <= EQUAL_TOL * max(abs(tau1), abs(sigma1)):
        us = roots_upper_half(tau1, k).upper_roots
        return "double", [(u / (k * k * tau1), u) for u in us]
    terms = [(1 / (k * (tau1 - sigma1)), u) for u in roots_upper_half(tau1, k).upper_roots]
    terms += [(1 / (k * (sigma1 - tau1)), v) for v in roots_upper_half(sigma1, k).upper_roots]
    return "simple", terms


def inner_integral_residues(k, tau1, sigma1, A, b_phase=0.0):
    """The inner integral in closed form; ``A`` (> 0) and ``b_phase`` may be arrays."""
    _require_nonreal(tau1, sigma1)
    A = np.asarray(A, dtype=float)
    if np.any(A <= 0):
        raise PreconditionViolation("A must be positive to close the contour upward")
    kind, terms = residue_terms(k, tau1, sigma1)
    total = np.zeros(A.shape, dtype=complex)
    for coef, r in terms:
        e = np.exp(1j * r * A)
        total = total + coef * (1j * A * e if kind == "double" else e)
    out = 2j * math.pi * np.exp(1j * np.asarray(b_phase, dtype=float)) * total
    return complex(out) if out.ndim == 0 else out


def _inner_integrand(k, tau1, sigma1, A, b_phase):
    def f(rho):
        rk = rho ** k
        return rho ** (k - 1) * np.exp(1j * (rho * A + b_phase)) / ((rk - tau1) * (rk - sigma1))
    return f


def inner_integral_quadrature(k, tau1, sigma1, A, b_phase=0.0, R=1e3, tol=1e-10):
    """Direct quadrature of the inner integral over ``[-R, R]``.

    Returns ``(value, tail_bound)``; the tail bound uses one integration by
    parts of the ``e^{i rho A}`` factor against the ``O(rho^(-k-1))`` amplitude.
    """
    _require_nonreal(tau1, sigma1)
    tau1, sigma1 = complex(tau1), complex(sigma1)
    f = _inner_integrand(k, tau1, sigma1, A, b_phase)
    cs = [r for c in (tau1, sigma1) for r in np.roots([1] + [0] * (k - 1) + [-c])]
    pts = {-R, R}
    for r in cs:
        w = max(abs(r.imag), 1e-3)
        for d in (-4 * w, -w, 0.0, w, 4 * w):
            x = r.real + d
            if -R < x < R:
                pts.add(x)
    pts = sorted(pts)
    breaks = [pts[0]]
    step = min(0.5, math.pi / max(A, 1e-300))
    for nxt in pts[1:]:
        n = max(1, int(math.ceil((nxt - breaks[-1]) / max(step, 1e-3))))
        breaks.extend(np.linspace(breaks[-1], nxt, n + 1)[1:])
    val, err = gk_adaptive(f, breaks, abstol=tol, reltol=1e-13)
    big = max(abs(tau1), abs(sigma1))
    if R ** k <= 2 * big:
        raise NonConvergent("truncation radius too small for the tail bound")
    amp = R ** (k - 1) / ((R ** k - abs(tau1)) * (R ** k - abs(sigma1)))
    tail = 2 * 2 * amp / A + err
    return complex(val), float(tail)


# ---------------------------------------------------------------------------
# semicircles and Van der Corput


def semicircle_integral(psi, x0, r, n=64):
    """``int psi dz`` over the clockwise upper semicircle ``|z - x0| = r``."""
    x, w = gauss_legendre(n)
    theta = 0.5 * math.pi * (x + 1)
    z = x0 + r * np.exp(1j * theta)
    dz = 1j * r * np.exp(1j * theta)
    # counter-clockwise from 0 to pi, then flip orientation
    return -complex(np.sum(w * psi(z) * dz) * 0.5 * math.pi)


def halfdisk_max(fun, x0, r, n=129):
    """Max of ``|fun|`` over the closed upper half-disk, sampled on its boundary.

    For ``fun`` holomorphic near the half-disk the maximum modulus principle
    puts the maximum on the boundary.
    """
    theta = np.linspace(0, math.pi, n)
    arc = x0 + r * np.exp(1j * theta)
    diam = x0 + r * np.linspace(-1, 1, n)
    return float(max(np.max(np.abs(fun(arc))), np.max(np.abs(fun(diam.astype(complex))))))


def semicircle_correction_bound(pole: float, radius: float, residue: complex, hprime_max: float) -> float:
    """Bound ``pi r max|h'|`` on ``|int_semicircle psi + pi i Res|``, ``h = (z - pole) psi``."""
    if radius <= 0:
        raise PreconditionViolation("radius must be positive")
    return math.pi * radius * float(hprime_max)


def vdc_bound(second_derivative_min: float) -> float:
    """Van der Corput: ``|int e^{iF}| <= 8 sqrt(pi) / sqrt(min |F''|)``."""
    if not second_derivative_min > 0:
        raise PreconditionViolation("min |F''| must be positive")
    return 8 * math.sqrt(math.pi) / math.sqrt(second_derivative_min)


# ---------------------------------------------------------------------------
# int e^{i(b e^x + sign e^{alpha x})} dx

TAIL_SPEED = 1e4
_EXP_MAX = 700.0


@dataclass(frozen=True)
class OscillatoryResult:
    value: complex
    error_estimate: float
    a_priori_bound: float
    near_stationary: tuple = field(default=(), compare=False)
    tail_start: float | None = None

    def __complex__(self):
        return complex(self.value)

    def __abs__(self):
        return abs(self.value)


def oscillation_constant(alpha: float) -> float:
    """``C(alpha) = 10 + ln((e + 1)/(alpha^2 |e^alpha - e|)) / alpha``."""
    return 10 + math.log((math.e + 1) / (alpha ** 2 * abs(math.exp(alpha) - math.e))) / alpha


def oscillation_a_priori_bound(alpha: float) -> float:
    """A-priori bound: ``[0, C]`` trivially, two short intervals of total length 2,
    and at most three Van der Corput pieces at 20 each."""
    return max(oscillation_constant(alpha), 0.0) + 2 + 60


def _derivs(b, alpha, sign, x, order):
    """``h^{(order)}`` for ``h = b e^x + sign e^{alpha x}`` (order 0 is h itself).

    Overflow gives ``inf``, which every caller reads as fast phase.
    """
    with np.errstate(over="ignore", invalid="ignore"):
        return b * np.exp(x) + sign * alpha ** order * np.exp(alpha * x)


def _critical_points(b, alpha, sign, orders=(1, 2, 3)):
    """Real zeros of ``h', h'', h'''`` (each has at most one)."""
    out = []
    if b == 0 or np.sign(b) == sign:
        return out
    for n in orders:
        out.append((math.log(abs(b)) - n * math.log(alpha)) / (alpha - 1))
    return out


def _tail_start(b, alpha, sign, x0):
    """A point past all critical points where ``|h'| >= TAIL_SPEED`` and
    ``h''/h'^3`` is monotone (checked by sampling)."""
    X = max([x0] + [c + 1.0 for c in _critical_points(b, alpha, sign)])
    while True:
        if abs(_derivs(b, alpha, sign, X, 1)) >= TAIL_SPEED:
            xs = np.linspace(X, X + 40.0 / max(alpha, 1.0) + 5, 4001)
            xs = xs[np.maximum(xs, alpha * xs) < _EXP_MAX]
            with np.errstate(over="ignore"):
                g = _derivs(b, alpha, sign, xs, 2) / _derivs(b, alpha, sign, xs, 1) ** 3
            d = np.diff(np.abs(g))
            if np.all(d <= 1e-300):
                return X
        X += 0.25
        if X > _EXP_MAX:
            raise NonConvergent("no asymptotic regime found for the oscillatory tail")


def _boundary_term(b, alpha, sign, x):
    """``e^{ih}(1/(ih') - h''/h'^3)`` at ``x``; zero past overflow."""
    if max(x, alpha * x) >= _EXP_MAX:
        return 0j
    h0 = _derivs(b, alpha, sign, x, 0)
    h1 = _derivs(b, alpha, sign, x, 1)
    h2 = _derivs(b, alpha, sign, x, 2)
    ph = math.fmod(h0, 2 * math.pi)
    with np.errstate(over="ignore"):
        corr = h2 / h1 ** 3
    return complex(cmath.exp(1j * ph) * (1 / (1j * h1) - corr))


def _direct(b, alpha, sign, x0, x1, n=20):
    if x1 <= x0:
        return 0j, 0.0

    def rate(x):
        return np.abs(_derivs(b, alpha, sign, x, 1))

    br = phase_panels(x0, x1, rate, max_width=0.5, per_panel=math.pi, grid=20001)

    def f(x):
        return np.exp(1j * _derivs(b, alpha, sign, x, 0))

    hi = gl_panels(f, br, n=n, cumulative=True)
    lo = gl_panels(f, br, n=n - 6, cumulative=True)
    return complex(hi.sum()), float(np.abs(hi - lo).sum())


def near_stationary_intervals(b, alpha, sign, x0, x1):
    """The set ``{x in [x0, x1] : |h''(x)| < 1}`` as a tuple of intervals.

    ``h''`` changes monotonicity at most once, so the set has at most two
    components; the endpoints are refined by bisection.
    """
    if x1 <= x0:
        return ()
    top = x1
    # past the zero of h''' and with |h''| > 1 the set cannot reappear
    crit = _critical_points(b, alpha, sign, orders=(2, 3))
    far = max([x0] + [c + 1 for c in crit])
    while abs(_derivs(b, alpha, sign, far, 2)) <= 1 and far < _EXP_MAX:
        far += 0.5
    top = min(x1, far + 1.0)
    xs = np.linspace(x0, top, 8001)
    inside = np.abs(_derivs(b, alpha, sign, xs, 2)) < 1

    def edge(lo, hi):
        f_lo = abs(_derivs(b, alpha, sign, lo, 2)) < 1
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if (abs(_derivs(b, alpha, sign, mid, 2)) < 1) == f_lo:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    out = []
    start = x0 if inside[0] else None
    for i in range(1, xs.size):
        if inside[i] and not inside[i - 1]:
            start = edge(xs[i - 1], xs[i])
        elif not inside[i] and inside[i - 1]:
            out.append((start, edge(xs[i - 1], xs[i])))
            start = None
    if start is not None:
        out.append((start, top if top < x1 else x1))
    return tuple(out)


IBP_TOL = 1e-9


def _ibp_ok(b, alpha, sign, x):
    """Where two integrations by parts are accurate: fast phase and small ``h''/h'^3``."""
    h1 = np.abs(_derivs(b, alpha, sign, x, 1))
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        g = np.abs(_derivs(b, alpha, sign, x, 2)) / h1 ** 3
    return (h1 >= TAIL_SPEED) & (g <= IBP_TOL)


def _runs(b, alpha, sign, x0, x1, n=20001):
    """Split ``[x0, x1]`` into ``(lo, hi, asymptotic)`` runs of the predicate."""
    pts = [np.linspace(x0, x1, n)]
    for c in _critical_points(b, alpha, sign, orders=(1,)):
        off = np.geomspace(1e-10, 1.0, 400)
        pts.append(np.concatenate([c - off, [c], c + off]))
    xs = np.unique(np.clip(np.concatenate(pts), x0, x1))
    ok = _ibp_ok(b, alpha, sign, xs)
    # isolated asymptotic samples are not worth a run
    cuts = [x0]
    kinds = [bool(ok[0])]
    for i in range(1, xs.size):
        if ok[i] != ok[i - 1]:
            lo, hi, f_lo = xs[i - 1], xs[i], ok[i - 1]
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                if bool(_ibp_ok(b, alpha, sign, np.array([mid]))[0]) == f_lo:
                    lo = mid
                else:
                    hi = mid
            cuts.append(hi if f_lo else lo)
            kinds.append(bool(ok[i]))
    cuts.append(x1)
    runs = [(lo, hi, kind) for lo, hi, kind in zip(cuts[:-1], cuts[1:], kinds) if hi > lo]
    return runs, xs


def _asymptotic(b, alpha, sign, lo, hi, xs):
    """Boundary terms on ``[lo, hi]``; the remainder is bounded by the total
    variation of ``h''/h'^3``, measured on the samples inside the run."""
    val = _boundary_term(b, alpha, sign, hi) - _boundary_term(b, alpha, sign, lo)
    pts = np.concatenate([[lo], xs[(xs > lo) & (xs < hi)], [hi]])
    pts = pts[np.maximum(pts, alpha * pts) < _EXP_MAX]
    with np.errstate(over="ignore"):
        g = _derivs(b, alpha, sign, pts, 2) / _derivs(b, alpha, sign, pts, 1) ** 3
    tv = float(np.abs(np.diff(g)).sum()) if g.size > 1 else 0.0
    return val, 1.1 * tv + (abs(g[-1]) if g.size else 0.0)


FAR_SPEED = 1e24
_FAR_EXP = 600.0


def _log_abs_deriv(b, alpha, sign, x, order):
    """``log |h^{(order)}(x)|`` without overflow."""
    terms = [(math.log(abs(b)) + x, math.copysign(1.0, b))] if b != 0 else []
    terms.append((order * math.log(alpha) + alpha * x, float(sign)))
    if len(terms) == 1:
        return terms[0][0]
    (A, sa), (B, sb) = terms
    hi, d = max(A, B), -abs(A - B)
    if sa == sb:
        return hi + math.log1p(math.exp(d))
    return -math.inf if d == 0 else hi + math.log(-math.expm1(d))


def _far_cut(b, alpha, sign, x0):
    """First ``x >= x0`` (step 1/4) with ``|h'|, |h''| >= FAR_SPEED``."""
    lim = math.log(FAR_SPEED)
    x = x0
    while min(_log_abs_deriv(b, alpha, sign, x, 1), _log_abs_deriv(b, alpha, sign, x, 2)) < lim:
        x += 0.25
    return x


def _far_bound(b, alpha, sign, lo, hi):
    """Rigorous bound on ``|int_lo^hi e^{ih}|`` from the derivative tests.

    Between consecutive zeros of the second and third derivatives both ``h'``
    and ``h''`` are monotone, so their minimum moduli sit at the ends; one more
    cut halfway between the zeros of ``h''`` and ``h'`` keeps both away from
    zero at the shared ends. A piece
    is then at most ``3/min|h'|`` (when ``h'`` has no zero inside) and at most
    ``8 sqrt(pi)/sqrt(min|h''|)``.
    """
    crit = _critical_points(b, alpha, sign)
    c1 = crit[0] if crit else None
    inner = list(crit[1:])
    if crit:
        # |h'| is still large halfway from the zero of h'' to the zero of h'
        inner.append(0.5 * (crit[0] + crit[1]))
    cuts = sorted({lo, hi, *[c for c in inner if lo < c < hi]})
    total = 0.0
    for a, z in zip(cuts[:-1], cuts[1:]):
        m2 = min(_log_abs_deriv(b, alpha, sign, a, 2), _log_abs_deriv(b, alpha, sign, z, 2))
        best = 8 * math.sqrt(math.pi) * math.exp(-0.5 * m2) if m2 > -math.inf else math.inf
        if c1 is None or not a <= c1 <= z:
            m1 = min(_log_abs_deriv(b, alpha, sign, a, 1), _log_abs_deriv(b, alpha, sign, z, 1))
            best = min(best, 3 * math.exp(-m1) if m1 > -math.inf else math.inf)
        total += best
    return total


def oscillatory_exp_segment(b, alpha, x0, x1, sign=1) -> OscillatoryResult:
    """``int_{x0}^{x1} e^{i(b e^x + sign e^{alpha x})} dx``.

    Up to the tail start the range is cut into runs. Where ``|h'|`` is at
    least ``TAIL_SPEED`` and ``|h''/h'^3|`` at most ``IBP_TOL`` the integral is
    two boundary terms of integration by parts, elsewhere Gauss-Legendre
    panels sized by ``|h'|``. Past the last critical point the same boundary
    terms close the tail, with the remainder bounded by the variation of
    ``h''/h'^3``. When the critical points lie past the float range (tiny
    ``|b|``) the integral is computed up to where ``|h'|, |h''| >= FAR_SPEED``
    and the rest enters the error estimate through derivative-test bounds.
    """
    alpha = float(alpha)
    if not alpha > 0 or abs(alpha - 1) < 1e-12:
        raise PreconditionViolation("alpha must be positive and different from 1")
    if sign not in (1, -1):
        raise PreconditionViolation("sign must be +1 or -1")
    b = float(b)
    bound = oscillation_a_priori_bound(alpha) + max(0.0, -x0)
    if x1 <= x0:
        return OscillatoryResult(0j, 0.0, bound)
    val, err = 0j, 0.0
    far = [c for c in _critical_points(b, alpha, sign) if c + 1 > x0]
    if far and max(far) * max(alpha, 1.0) > _FAR_EXP:
        # critical points beyond the float range: bound the far part instead
        XF = _far_cut(b, alpha, sign, x0)
        if XF < x1:
            err += _far_bound(b, alpha, sign, XF, x1)
            x1 = XF
        X = x1
    else:
        X = _tail_start(b, alpha, sign, x0)
    top = min(X, x1)
    if top > x0:
        runs, xs = _runs(b, alpha, sign, x0, top)
        for lo, hi, asym in runs:
            v, e = (_asymptotic(b, alpha, sign, lo, hi, xs) if asym else _direct(b, alpha, sign, lo, hi))
            val += v
            err += e
    tail_start = None
    if x1 > X:
        tail_start = X
        val += _boundary_term(b, alpha, sign, x1) - _boundary_term(b, alpha, sign, X)
        with np.errstate(over="ignore"):
            err += abs(_derivs(b, alpha, sign, X, 2) / _derivs(b, alpha, sign, X, 1) ** 3)
    ns = near_stationary_intervals(b, alpha, sign, x0, x1)
    return OscillatoryResult(complex(val), float(err), bound, ns, tail_start)


def oscillatory_exp_integral(b, alpha_exp, R, sign=1) -> OscillatoryResult:
    """``int_0^R e^{i(b e^x + sign e^{alpha x})} dx`` with its a-priori bound."""
    if R < 0:
        raise PreconditionViolation("R must be nonnegative")
    return oscillatory_exp_segment(b, alpha_exp, 0.0, float(R), sign)


def vdc_pieces(b, alpha, sign, R):
    """Van der Corput checks on the pieces of ``[max(C, 0), R]`` outside the
    near-stationary set: ``(lo, hi, |integral|, bound)`` per piece."""
    c0 = max(oscillation_constant(alpha), 0.0)
    if R <= c0:
        return []
    ns = near_stationary_intervals(b, alpha, sign, c0, R)
    cuts = [c0]
    for lo, hi in ns:
        cuts += [lo, hi]
    cuts.append(R)
    out = []
    for lo, hi in zip(cuts[::2], cuts[1::2]):
        if hi - lo <= 1e-12:
            continue
        # |h''| is >= 1 here; sample for its minimum (it is piecewise monotone)
        top = min(hi, lo + 60.0)
        xs = np.linspace(lo, top, 4001)
        m = float(np.min(np.abs(_derivs(b, alpha, sign, xs, 2))))
        val = oscillatory_exp_segment(b, alpha, lo, hi, sign)
        out.append((lo, hi, abs(val.value), vdc_bound(max(m, 1e-300))))
    return out
