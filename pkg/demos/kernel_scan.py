"""Running sup of the reduced elliptic kernel as the outer radius grows."""

import numpy as np

from bilembed.kernelscan import KernelScanConfig, Path, scan_uniform_bound

b = tuple(np.concatenate([-np.logspace(-2, 2, 6)[::-1], np.logspace(-2, 2, 6)]))
cfg = KernelScanConfig(1, 2, 1j, 2j, (0.5, 0.1), tuple(np.exp([4.0, 6.0, 8.0])), b)
rep = scan_uniform_bound(cfg, Path.ELLIPTIC)
for R, s in zip(cfg.R_grid, rep.sup_by_R):
    print(f"R = {R:9.1f}   sup |K| = {s:.6f}")
print("stabilized:", rep.stabilized)
