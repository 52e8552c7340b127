"""Elliptic counterexample: log growth of the pairing in the failing case only."""

from bilembed.classifier import classify
from bilembed.acceptance import reduced
from bilembed.witness import elliptic_sweep, knapp_report

ts = (16.0, 64.0, 256.0)
for s1 in (-1j, 1j):
    p = reduced(1, 2, 0.0, 0.5, s1, 2j)
    sw = elliptic_sweep(p, ts=ts, n=512)
    print(f"sigma1={s1}: {classify(p).status.value}, slope in log t = {sw.fit.slope:.4f}, "
          f"||h||_1 max/min = {sw.h_ratio:.3f}")

rep = knapp_report(reduced(1, 2, 0.0, 0.5, 0.25, 1j), ns=(4, 8, 16, 32))
print("Knapp zeta =", rep.zeta, "L2 slope", round(rep.l2_fit.slope, 4), "image L1 slope", round(rep.l1_fit.slope, 4))
