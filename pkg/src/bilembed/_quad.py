"""Vectorized panel quadrature shared by the numerical modules.

Two tools live here:

* :func:`gk_adaptive` -- adaptive Gauss-Kronrod (7/15) over a list of
  starting panels, all panels of a sweep evaluated in one vectorized call.
* :func:`phase_panels` / :func:`gl_panels` -- fixed Gauss-Legendre panels
  whose widths follow a local phase speed, for oscillatory integrands.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import NonConvergent

_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])

# full 15-point node set on [-1, 1] and matching weights
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_WK = np.concatenate([_WGK[:-1], _WGK[::-1]])
_WG15 = np.zeros(15)
_WG15[[1, 3, 5]] = _WG[:3]
_WG15[[9, 11, 13]] = _WG[:3][::-1]
_WG15[7] = _WG[3]


def gk_adaptive(f, breaks, abstol=1e-13, reltol=1e-12, max_panels=200_000):
    """Integrate ``f`` over ``[breaks[0], breaks[-1]]``.

    ``f`` must accept a 1-D float array and return an array of the same
    shape (real or complex). Returns ``(value, error_estimate)``.
    """
    a = np.asarray(breaks[:-1], dtype=float)
    b = np.asarray(breaks[1:], dtype=float)
    done_val = 0.0 + 0.0j
    done_err = 0.0
    while True:
        half = 0.5 * (b - a)
        mid = 0.5 * (b + a)
        x = mid[:, None] + half[:, None] * _NODES[None, :]
        fx = np.asarray(f(x.ravel())).reshape(x.shape)
        k = (fx * _WK).sum(axis=1) * half
        g = (fx * _WG15).sum(axis=1) * half
        err = np.abs(k - g)
        total = done_val + k.sum()
        target = max(abstol, reltol * abs(total))
        if done_err + err.sum() <= target:
            return complex(total), float(done_err + err.sum())
        # accept panels that are individually fine relative to their share
        share = target * (b - a) / max((b - a).sum(), 1e-300)
        ok = err <= 0.5 * share
        done_val += k[ok].sum()
        done_err += err[ok].sum()
        a, b, mid = a[~ok], b[~ok], mid[~ok]
        if a.size == 0:
            return complex(done_val), float(done_err)
        if 2 * a.size > max_panels:
            raise NonConvergent(
                f"adaptive quadrature exceeded {max_panels} panels (error {done_err + err[~ok].sum():.3e})"
            )
        a, b = np.concatenate([a, mid]), np.concatenate([mid, b])


@lru_cache(maxsize=None)
def gauss_legendre(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def gl_panels(f, breaks, n=20, cumulative=False):
    """Fixed ``n``-point Gauss-Legendre on every panel of ``breaks``.

    With ``cumulative=True`` the per-panel contributions are returned
    instead of their sum.
    """
    breaks = np.asarray(breaks, dtype=float)
    x, w = gauss_legendre(n)
    a, b = breaks[:-1], breaks[1:]
    half = 0.5 * (b - a)
    nodes = 0.5 * (a + b)[:, None] + half[:, None] * x[None, :]
    vals = np.asarray(f(nodes)) * w[None, :]
    per = vals.sum(axis=1) * half
    return per if cumulative else per.sum()


def phase_panels(lo, hi, rate, max_width=0.5, log_width=None, per_panel=np.pi, grid=20001, max_panels=4_000_000):
    """Breakpoints on ``[lo, hi]`` such that each panel spans at most about
    ``per_panel`` radians of phase (``rate`` is |d phase / dx|), is at most
    ``max_width`` long and, with ``log_width`` set (``lo > 0``), at most a
    factor ``exp(log_width)`` wide.
    """
    if hi <= lo:
        return np.array([lo, hi])
    if log_width is not None and lo > 0:
        xs = np.unique(np.concatenate([np.geomspace(lo, hi, grid // 2), np.linspace(lo, hi, grid // 2)]))
    else:
        xs = np.linspace(lo, hi, grid)
    dens = np.abs(rate(xs)) / per_panel + 1.0 / max_width
    if log_width is not None and lo > 0:
        dens = dens + 1.0 / (log_width * xs)
    m = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(xs))])
    # trapezoid may under-resolve a fast-growing density; pad the count
    n = int(np.ceil(1.25 * m[-1])) + 1
    if n > max_panels:
        raise NonConvergent(f"oscillatory range needs {n} panels (limit {max_panels})")
    levels = np.linspace(0.0, m[-1], n + 1)
    br = np.interp(levels, m, xs)
    br[0], br[-1] = lo, hi
    return br
