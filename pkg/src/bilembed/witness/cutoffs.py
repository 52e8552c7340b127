"""Smooth compactly supported cutoffs."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


def bump(x):
    """``exp(1 - 1/(1 - (2x)^2))`` on ``|x| < 1/2``, zero outside."""
    x = np.asarray(x, dtype=float)
    s = 1.0 - (2.0 * x) ** 2
    out = np.zeros_like(s)
    m = s > 0
    out[m] = np.exp(1.0 - 1.0 / s[m])
    return out


def _e(x):
    out = np.zeros_like(x)
    m = x > 0
    out[m] = np.exp(-1.0 / x[m])
    return out


def smooth_step(s):
    """C-infinity step: 0 for ``s <= 0``, 1 for ``s >= 1``."""
    s = np.asarray(s, dtype=float)
    a, b = _e(s), _e(1.0 - s)
    return a / (a + b)


class CutoffKind(str, enum.Enum):
    BUMP = "bump"
    PLATEAU = "plateau"


@dataclass(frozen=True)
class Cutoff:
    """Radial profile ``phi(r)``, ``r >= 0``.

    ``plateau`` equals 1 on ``[0, inner]`` and 0 beyond ``outer``; ``bump``
    is :func:`bump` rescaled to vanish at ``outer``.
    """

    kind: CutoffKind = CutoffKind.PLATEAU
    inner: float = 0.5
    outer: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", CutoffKind(self.kind))
        if not 0 <= self.inner < self.outer:
            raise ValueError("need 0 <= inner < outer")

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if self.kind is CutoffKind.BUMP:
            return bump(0.5 * r / self.outer)
        return smooth_step((self.outer - r) / (self.outer - self.inner))

    @property
    def flat_radius(self) -> float:
        """Radius below which the profile is identically 1."""
        return self.inner if self.kind is CutoffKind.PLATEAU else 0.0
