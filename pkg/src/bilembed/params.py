"""Parameter domain of the bilinear embedding inequalities.

A tuple ``(k, l, alpha, beta, sigma, tau)`` describes the inequality

    |<f, g>_{W^{alpha,beta}}| <~ ||(d1^k - tau d2^l) f||_1 ||(d1^k - sigma d2^l) g||_1

and everything downstream is phrased in terms of the reduced symbols

    tau1   = (2 pi i)^(l-k) tau
    sigma1 = (-1)^(l-k) (2 pi i)^(l-k) conj(sigma)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

TOL_REAL = 1e-12
TWO_PI_I = 2j * math.pi


@dataclass(frozen=True)
class BEParams:
    k: int
    l: int
    alpha: float
    beta: float
    sigma: complex
    tau: complex

    def __post_init__(self):
        if int(self.k) != self.k or int(self.l) != self.l or self.k < 1 or self.l < 1:
            raise ValueError(f"k and l must be positive integers, got k={self.k}, l={self.l}")
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("alpha and beta must be nonnegative")
        if self.sigma == 0 or self.tau == 0:
            raise ValueError("sigma and tau must be nonzero")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "l", int(self.l))
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))
        object.__setattr__(self, "sigma", complex(self.sigma))
        object.__setattr__(self, "tau", complex(self.tau))

    def transposed(self) -> "BEParams":
        """Swap the roles of the two variables.

        Exchanging x and y turns ``d1^k - c d2^l`` into ``-c (d1^l - c^{-1} d2^k)``,
        so the transposed tuple carries the reciprocal coefficients.
        """
        return BEParams(self.l, self.k, self.beta, self.alpha, 1 / self.sigma, 1 / self.tau)


@dataclass(frozen=True)
class ReducedPair:
    sigma1: complex
    tau1: complex
    sigma1_degenerate: bool
    tau1_degenerate: bool
    elliptic: bool
    near_tolerance: bool = False


def int_power(z: complex, n: int) -> complex:
    """``z**n`` by repeated multiplication, ``n`` any integer."""
    result = 1 + 0j
    base = complex(z)
    m = abs(n)
    while m:
        if m & 1:
            result *= base
        base *= base
        m >>= 1
    return 1 / result if n < 0 else result


def reduction_factors(k: int, l: int) -> tuple[complex, complex]:
    """Return ``(c_tau, c_sigma)`` with ``tau1 = c_tau*tau`` and ``sigma1 = c_sigma*conj(sigma)``."""
    n = l - k
    c_tau = int_power(TWO_PI_I, n)
    c_sigma = c_tau if n % 2 == 0 else -c_tau
    return c_tau, c_sigma


def is_real(c: complex, tol_real: float = TOL_REAL) -> bool:
    return abs(c.imag) <= tol_real * max(1.0, abs(c))


def is_degenerate(c: complex, k: int, l: int, tol_real: float = TOL_REAL) -> bool:
    """True iff ``xi^k = c eta^l`` has a nonzero real solution.

    For an odd order that happens for every real ``c``; when both orders are
    even only a positive ``c`` works.
    """
    if not is_real(c, tol_real):
        return False
    if k % 2 == 0 and l % 2 == 0:
        return c.real > 0
    return True


def reduce(p: BEParams, tol_real: float = TOL_REAL) -> ReducedPair:
    c_tau, c_sigma = reduction_factors(p.k, p.l)
    tau1 = c_tau * p.tau
    sigma1 = c_sigma * p.sigma.conjugate()
    s_deg = is_degenerate(sigma1, p.k, p.l, tol_real)
    t_deg = is_degenerate(tau1, p.k, p.l, tol_real)
    near = any(
        tol_real * max(1.0, abs(c)) < abs(c.imag) <= 10 * tol_real * max(1.0, abs(c))
        for c in (sigma1, tau1)
    )
    return ReducedPair(sigma1, tau1, s_deg, t_deg, not s_deg and not t_deg, near)


def unreduce(k: int, l: int, sigma1: complex, tau1: complex) -> tuple[complex, complex]:
    """Inverse of :func:`reduce` on the coefficients: ``(sigma, tau)`` from ``(sigma1, tau1)``."""
    c_tau, c_sigma = reduction_factors(k, l)
    return (complex(sigma1) / c_sigma).conjugate(), complex(tau1) / c_tau


def on_homogeneity_line(p: BEParams, tol: float = 1e-9) -> bool:
    return abs((p.alpha + 0.5) / p.k + (p.beta + 0.5) / p.l - 1.0) <= tol


def scaling_exponents(p: BEParams) -> tuple[int, int]:
    """Exponents ``(l, k)`` of the dilation ``(x, y) -> (lam^l x, lam^k y)``."""
    return p.l, p.k


def beta_on_line(k: int, l: int, alpha: float) -> float:
    """The ``beta`` that puts ``(alpha, beta)`` on the homogeneity line."""
    return l * (1.0 - (alpha + 0.5) / k) - 0.5
