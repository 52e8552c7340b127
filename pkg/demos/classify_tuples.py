"""Classify a handful of parameter tuples and print the verdicts."""

import math

from bilembed.classifier import classify
from bilembed.acceptance import reduced
from bilembed.params import BEParams

c = 1 / (2 * math.pi)
cases = {
    "same sign on the real axis": BEParams(1, 2, 0.0, 0.5, c, c),
    "opposite signs on the real axis": BEParams(1, 2, 0.0, 0.5, -c, c),
    "off the homogeneity line": BEParams(1, 2, 0.0, 0.3, c, c),
    "elliptic, reduced (-i, 2i)": reduced(1, 2, 0.0, 0.5, -1j, 2j),
    "elliptic, reduced (i, 2i)": reduced(1, 2, 0.0, 0.5, 1j, 2j),
}
for name, p in cases.items():
    v = classify(p)
    print(f"{name:34s} {v.status.value:8s} {v.basis.value}")
