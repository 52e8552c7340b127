"""The obstruction integral

    I(k, alpha; sigma1, tau1) = int_R |rho|^(2 alpha) d rho / ((rho^k - tau1)(rho^k - sigma1))

whose non-vanishing rules out the bilinear inequality in the elliptic case.

Closed forms are derived through ``s = rho^k`` with the exponent
``gamma = (2 alpha - k + 1)/k``; the normalization constants of the
homogeneous functions ``Phi`` come from one quadrature each. The
quadrature oracle integrates the original ``rho`` form directly.
"""

from __future__ import annotations

import cmath
import enum
import math
import threading
from dataclasses import dataclass

import numpy as np

from ._quad import gk_adaptive
from .errors import NonConvergent, OnBranchCut, PreconditionViolation

CRIT_TOL = 1e-12
_CUT_TOL = 1e-14


class Method(str, enum.Enum):
    CLOSED_FORM = "ClosedForm"
    QUADRATURE = "Quadrature"


class CaseTag(str, enum.Enum):
    EVEN_CRITICAL = "EvenCritical"
    EVEN_CRITICAL_EQUAL = "EvenCriticalEqual"
    EVEN_SUBCRITICAL = "EvenSubcritical"
    EVEN_SUBCRITICAL_EQUAL = "EvenSubcriticalEqual"
    ODD_CRITICAL = "OddCritical"
    ODD_NONCRITICAL = "OddNoncritical"
    ODD_NONCRITICAL_EQUAL = "OddNoncriticalEqual"


class Convention(str, enum.Enum):
    CUT_ON_POSITIVE_AXIS = "CutOnPositiveAxis"
    CUT_ON_NEGATIVE_AXIS = "CutOnNegativeAxis"


class Parity(str, enum.Enum):
    EVEN = "Even"
    ODD = "Odd"


@dataclass(frozen=True)
class ObstructionResult:
    value: complex
    method: Method
    case_tag: CaseTag
    gamma: float


def gamma_exponent(k: int, alpha: float) -> float:
    return (2 * alpha - k + 1) / k


def _on_ray(z: complex, positive: bool) -> bool:
    if abs(z.imag) > _CUT_TOL * max(abs(z), 1e-300):
        return False
    return z.real >= 0 if positive else z.real <= 0


def delta_branch(zeta: complex, gamma: float, convention: Convention) -> complex:
    """Single-valued ``zeta**gamma`` on a slit plane.

    ``CutOnPositiveAxis`` is real positive on the negative half-line,
    ``CutOnNegativeAxis`` is the principal branch (positive on the positive
    half-line).
    """
    zeta = complex(zeta)
    convention = Convention(convention)
    if convention is Convention.CUT_ON_POSITIVE_AXIS:
        if _on_ray(zeta, positive=True):
            raise OnBranchCut(f"{zeta} lies on the cut [0, +inf)")
        return (-zeta) ** gamma if gamma else 1.0 + 0j
    if _on_ray(zeta, positive=False):
        raise OnBranchCut(f"{zeta} lies on the cut (-inf, 0]")
    return zeta ** gamma if gamma else 1.0 + 0j


# ---------------------------------------------------------------------------
# quadrature in the log variable


def _log_integral(g, exponent_lo, exponent_hi, scale_hi, bound_lo, tol, centers=(), u_span=None, u_cap=None):
    """Integrate ``g(s) ds`` over ``(0, inf)`` after ``s = exp(u)``.

    ``g(s) <= bound_lo * s**exponent_lo`` near zero and
    ``|g(s)| <= 4 s**exponent_hi`` for ``s >= scale_hi``; both tails are cut
    where their analytic bounds fall below ``tol/10``. ``u_cap`` stops the
    upper end early; the caller then owns the rest.
    """
    if exponent_lo <= -1 or exponent_hi >= -1:
        raise PreconditionViolation("integrand is not integrable at 0 or at infinity")
    a_lo, a_hi = exponent_lo + 1, -(exponent_hi + 1)
    u_lo = math.log(tol / 20 * a_lo / max(bound_lo, 1e-300)) / a_lo
    u_lo = min(u_lo, math.log(scale_hi) - 5)
    u_hi = max(math.log(scale_hi), u_lo + 1)
    u_hi = max(u_hi, math.log(8 / (tol / 20 * a_hi)) / a_hi)
    if u_cap is not None:
        u_hi = min(u_hi, u_cap)
    if u_span is not None and u_hi - u_lo > u_span:
        raise NonConvergent(f"tail bound needs a log-range of {u_hi - u_lo:.1f} > {u_span}")
    pts = sorted({u_lo, u_hi, *[math.log(c) for c in centers if c > 0 and u_lo < math.log(c) < u_hi]})
    breaks = [pts[0]]
    for nxt in pts[1:]:
        n = max(1, int(math.ceil((nxt - breaks[-1]) / 0.5)))
        breaks.extend(np.linspace(breaks[-1], nxt, n + 1)[1:])

    def integrand(u):
        s = np.exp(u)
        return g(s) * s

    val, err = gk_adaptive(integrand, breaks, abstol=tol / 10, reltol=1e-14)
    return val, err


def _tail_beyond(g, k, alpha, R, tol):
    """``int_R^inf g(rho) drho`` in ``u = log v``, ``v = 1/rho``.

    ``|g| <= 8 rho^(2 alpha - 2k)`` there, so the cut at small ``v`` costs
    less than ``tol/20``.
    """
    a = 2 * k - 2 * alpha - 1
    u_top = -math.log(R)
    u_bot = min(math.log(tol / 20 * a / 8) / a, u_top - 1.0)

    def integrand(u):
        v = np.exp(u)
        return g(1.0 / v) / v

    n = max(1, int(math.ceil((u_top - u_bot) / 0.5)))
    val, _ = gk_adaptive(integrand, np.linspace(u_bot, u_top, n + 1), abstol=tol / 10, reltol=1e-14)
    return complex(val)


def _check_symbols(k, sigma1, tau1):
    sigma1, tau1 = complex(sigma1), complex(tau1)
    if sigma1 == 0 or tau1 == 0:
        raise PreconditionViolation("symbols must be nonzero")
    for c in (sigma1, tau1):
        if k % 2 == 0 and _on_ray(c, positive=True):
            raise PreconditionViolation(f"symbol {c} lies on [0, +inf): denominator vanishes on R")
        if k % 2 == 1 and abs(c.imag) <= _CUT_TOL * abs(c):
            raise PreconditionViolation(f"symbol {c} is real: denominator vanishes on R")
    return sigma1, tau1


def obstruction_quadrature_oracle(k, alpha, sigma1, tau1, R_max=None, tol=1e-10):
    """Direct quadrature of the obstruction integral in the ``rho`` variable.

    The two half-lines are paired (``rho`` with ``-rho``) and integrated in
    ``u = log rho``. With ``R_max`` the direct range stops at ``R_max`` and
    the remainder is integrated in ``v = 1/rho``, where the integrand is
    ``v^(2k - 2 alpha - 2)`` times a bracket that is smooth at ``v = 0``.
    """
    sigma1, tau1 = _check_symbols(k, sigma1, tau1)
    if 2 * alpha - 2 * k >= -1:
        raise PreconditionViolation("obstruction integral diverges at infinity (need 2 alpha < 2k - 1)")
    sgn = -1.0 if k % 2 else 1.0

    def g(rho):
        small = rho < 1
        r_lo = np.where(small, rho, 0.5)
        r_hi = np.where(small, 2.0, rho)
        rk = r_lo ** k
        lo = r_lo ** (2 * alpha) * (
            1.0 / ((rk - tau1) * (rk - sigma1)) + 1.0 / ((sgn * rk - tau1) * (sgn * rk - sigma1))
        )
        q = r_hi ** (-k)
        hi = r_hi ** (2 * alpha - 2 * k) * (
            1.0 / ((1 - tau1 * q) * (1 - sigma1 * q)) + 1.0 / ((sgn - tau1 * q) * (sgn - sigma1 * q))
        )
        return np.where(small, lo, hi)

    mags = [abs(sigma1) ** (1 / k), abs(tau1) ** (1 / k)]
    scale = (2 * max(abs(sigma1), abs(tau1))) ** (1 / k)
    # near 0 the bracket is at most 2/(min distance)^2 with distance >= |Im| or the modulus
    dist = min(_dist_to_real_power_range(c, k) for c in (sigma1, tau1))
    bound_lo = 2.0 / dist ** 2
    if R_max is not None and R_max < 2 * scale:
        raise PreconditionViolation(f"R_max={R_max} must exceed twice the pole scale {scale:.3g}")
    val, _ = _log_integral(
        lambda r: g(r), 2 * alpha, 2 * alpha - 2 * k, scale, bound_lo, tol,
        centers=mags + [0.5 * m for m in mags] + [2 * m for m in mags],
        u_cap=None if R_max is None else math.log(R_max),
    )
    if R_max is not None:
        val = val + _tail_beyond(g, k, alpha, R_max, tol)
    return complex(val)


def _dist_to_real_power_range(c: complex, k: int) -> float:
    """Lower bound for ``|s - c|`` over the values ``s = rho^k``, rho real."""
    if k % 2:
        return abs(c.imag)
    return abs(c.imag) if c.real > 0 else abs(c)


# ---------------------------------------------------------------------------
# normalization constants


class _Memo:
    """Thread-safe memo table; concurrent duplicate fills are harmless."""

    def __init__(self):
        self._lock = threading.Lock()
        self._data = {}

    def get(self, key, compute):
        with self._lock:
            if key in self._data:
                return self._data[key]
        value = compute()
        with self._lock:
            self._data.setdefault(key, value)
            return self._data[key]


_NORMS = _Memo()


def _key(gamma):
    return round(gamma, 10)


def even_normalization(gamma: float) -> complex:
    """``Phi(-1)`` for the half-line transform ``Phi(z) = int_0^inf s^gamma ds/(s - z)``.

    Obtained from the convergent combination at ``(-1, -2)``, which stays
    meaningful for ``0 < gamma < 1`` where ``Phi`` itself diverges.
    """
    if not -1 < gamma < 1 or abs(gamma) < CRIT_TOL:
        raise PreconditionViolation("need -1 < gamma < 1, gamma != 0")

    def compute():
        ref, _ = _log_integral(
            lambda s: s ** gamma / ((s + 1) * (s + 2)), gamma, gamma - 2, 4.0, 1.0, 1e-13,
            centers=(1.0, 2.0),
        )
        return complex(ref.real / (1 - 2 ** gamma))

    return _NORMS.get(("even", _key(gamma)), compute)


def odd_normalization(gamma: float) -> complex:
    """Constant ``C`` with ``Phi(z) = C z^gamma`` on the upper half-plane, from ``Phi(i)``."""
    if not -1 < gamma < 1:
        raise PreconditionViolation("need -1 < gamma < 1")

    def compute():
        # Phi(i) = int_0^inf 2 i s^gamma / (s^2 + 1) ds
        val, _ = _log_integral(
            lambda s: 2j * s ** gamma / (s * s + 1), gamma, gamma - 2, 2.0, 2.0, 1e-13, centers=(1.0,)
        )
        return complex(val) / delta_branch(1j, gamma, Convention.CUT_ON_NEGATIVE_AXIS)

    return _NORMS.get(("odd", _key(gamma)), compute)


def phi_function(zeta: complex, gamma: float, parity: Parity) -> complex:
    """The homogeneous Cauchy-type transforms behind the obstruction integral.

    Even: ``Phi(z) = int_0^inf s^gamma ds / (s - z)`` on ``C \\ [0, inf)``,
    ``-1 < gamma < 0``. Odd: the symmetric-limit transform of ``|s|^gamma``
    over the whole line on ``C \\ R``, ``-1 < gamma < 1``; it is odd in ``z``.
    """
    zeta = complex(zeta)
    parity = Parity(parity)
    if parity is Parity.EVEN:
        if not -1 < gamma < 0:
            raise PreconditionViolation("even Phi needs -1 < gamma < 0")
        return even_normalization(gamma) * delta_branch(zeta, gamma, Convention.CUT_ON_POSITIVE_AXIS)
    if not -1 < gamma < 1:
        raise PreconditionViolation("odd Phi needs -1 < gamma < 1")
    if abs(zeta.imag) <= _CUT_TOL * abs(zeta):
        raise PreconditionViolation("odd Phi is defined off the real axis")
    c = odd_normalization(gamma)
    if zeta.imag > 0:
        return c * delta_branch(zeta, gamma, Convention.CUT_ON_NEGATIVE_AXIS)
    return -c * delta_branch(-zeta, gamma, Convention.CUT_ON_NEGATIVE_AXIS)


def _homogeneous(zeta, gamma, parity):
    # like phi_function, but the even case also allows 0 < gamma < 1 through continuation
    if parity is Parity.EVEN:
        return even_normalization(gamma) * delta_branch(zeta, gamma, Convention.CUT_ON_POSITIVE_AXIS)
    return phi_function(zeta, gamma, parity)


def _principal_log(z: complex) -> complex:
    return cmath.log(z)


def case_of(k: int, alpha: float, sigma1: complex, tau1: complex, eq_tol: float = 1e-12) -> CaseTag:
    gamma = gamma_exponent(k, alpha)
    crit = abs(gamma) < CRIT_TOL
    equal = abs(sigma1 - tau1) <= eq_tol * max(abs(sigma1), abs(tau1))
    if k % 2 == 0:
        if crit:
            return CaseTag.EVEN_CRITICAL_EQUAL if equal else CaseTag.EVEN_CRITICAL
        return CaseTag.EVEN_SUBCRITICAL_EQUAL if equal else CaseTag.EVEN_SUBCRITICAL
    if crit:
        return CaseTag.ODD_CRITICAL
    return CaseTag.ODD_NONCRITICAL_EQUAL if equal else CaseTag.ODD_NONCRITICAL


def obstruction_integral(k: int, l: int, alpha: float, sigma1: complex, tau1: complex) -> ObstructionResult:
    """Closed-form value of the obstruction integral, dispatched on the case."""
    if k % 2 == 0 and l % 2 == 1:
        raise PreconditionViolation("k even requires l even")
    sigma1, tau1 = _check_symbols(k, sigma1, tau1)
    gamma = gamma_exponent(k, alpha)
    if not -1 < gamma < 1:
        raise PreconditionViolation(f"gamma = {gamma} outside (-1, 1); (alpha, beta) cannot be on the line")
    tag = case_of(k, alpha, sigma1, tau1)
    s, t = sigma1, tau1
    if tag is CaseTag.EVEN_CRITICAL:
        # int_0^inf ds/((s - t)(s - s1)) with the principal logarithm
        value = (2 / k) * (_principal_log(-t) - _principal_log(-s)) / (s - t)
    elif tag is CaseTag.EVEN_CRITICAL_EQUAL:
        value = (2 / k) * (-1 / t)
    elif tag is CaseTag.EVEN_SUBCRITICAL:
        value = (2 / k) * (_homogeneous(s, gamma, Parity.EVEN) - _homogeneous(t, gamma, Parity.EVEN)) / (s - t)
    elif tag is CaseTag.EVEN_SUBCRITICAL_EQUAL:
        value = (2 / k) * gamma * _homogeneous(s, gamma, Parity.EVEN) / s
    elif tag is CaseTag.ODD_CRITICAL:
        if s.imag * t.imag > 0:
            value = 0j
        elif t.imag > 0:
            value = (1 / k) * 2j * math.pi / (t - s)
        else:
            value = (1 / k) * 2j * math.pi / (s - t)
    elif tag is CaseTag.ODD_NONCRITICAL:
        value = (1 / k) * (phi_function(s, gamma, Parity.ODD) - phi_function(t, gamma, Parity.ODD)) / (s - t)
    else:
        value = (1 / k) * gamma * phi_function(s, gamma, Parity.ODD) / s
    return ObstructionResult(complex(value), Method.CLOSED_FORM, tag, gamma)


def obstruction_by_quadrature(k, l, alpha, sigma1, tau1, tol=1e-10) -> ObstructionResult:
    """Same contract as :func:`obstruction_integral`, value from the oracle."""
    if k % 2 == 0 and l % 2 == 1:
        raise PreconditionViolation("k even requires l even")
    val = obstruction_quadrature_oracle(k, alpha, sigma1, tau1, tol=tol)
    return ObstructionResult(val, Method.QUADRATURE, case_of(k, alpha, complex(sigma1), complex(tau1)),
                             gamma_exponent(k, alpha))
