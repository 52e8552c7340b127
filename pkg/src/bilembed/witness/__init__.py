"""Discrete Fourier engine and the two counterexample families."""

from .cutoffs import Cutoff, CutoffKind, bump, smooth_step
from .elliptic import (
    EllipticSweep, elliptic_sweep, elliptic_witness_pair, gauge_product, grid_product,
    h_l1_norm, predicted_product,
)
from .grid import (
    GridFunction2D, Side, forward_transform, from_function, from_spectrum, inverse_transform,
    l1_norm, l2_norm_sq,
)
from .knapp import ExponentFit, KnappReport, base_point, knapp_exponent_fit, knapp_report, knapp_sequence
from .ops import (
    anisotropic_rescale, apply_operator, be_ratio, derivation_identity_check, linear_ratio,
    sign_combination_identity, sobolev_product,
)

__all__ = [
    "Cutoff", "CutoffKind", "EllipticSweep", "ExponentFit", "GridFunction2D", "KnappReport", "Side",
    "anisotropic_rescale", "apply_operator", "base_point", "be_ratio", "bump", "derivation_identity_check",
    "elliptic_sweep", "elliptic_witness_pair", "forward_transform", "from_function", "from_spectrum",
    "gauge_product", "grid_product", "h_l1_norm", "inverse_transform", "knapp_exponent_fit", "knapp_report",
    "knapp_sequence", "l1_norm", "l2_norm_sq", "linear_ratio", "predicted_product",
    "sign_combination_identity", "smooth_step", "sobolev_product",
]
