"""Decision ladder mapping a parameter tuple to a verdict with its basis."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .params import TOL_REAL, BEParams, ReducedPair, is_real, on_homogeneity_line, reduce


class Status(str, enum.Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    CLAIMED = "Claimed"
    UNKNOWN = "Unknown"


class Basis(str, enum.Enum):
    HOMOGENEITY_LINE = "HomogeneityLine"
    THEOREM1 = "Theorem1"
    COROLLARY1 = "Corollary1"
    THEOREM2 = "Theorem2"
    COROLLARY2 = "Corollary2"
    LEMMA1 = "Lemma1"
    REMARK_K_EQUALS_L = "RemarkKEqualsL"
    NOT_COVERED = "NotCovered"


@dataclass(frozen=True)
class Verdict:
    status: Status
    basis: Basis
    notes: str = ""
    reduced: ReducedPair | None = field(default=None, compare=False)
    on_line: bool = field(default=True, compare=False)

    def __post_init__(self):
        if (self.status is Status.CLAIMED) != (self.basis is Basis.REMARK_K_EQUALS_L):
            raise ValueError("Claimed goes with RemarkKEqualsL and nothing else")
        if (self.status is Status.UNKNOWN) != (self.basis is Basis.NOT_COVERED):
            raise ValueError("Unknown goes with NotCovered and nothing else")

    def to_record(self) -> dict:
        """Stable JSON-ready record."""
        r = self.reduced
        rec = {
            "status": self.status.value,
            "basis": self.basis.value,
            "notes": self.notes,
            "sigma1": None if r is None else [r.sigma1.real, r.sigma1.imag],
            "tau1": None if r is None else [r.tau1.real, r.tau1.imag],
            "elliptic": None if r is None else r.elliptic,
            "on_line": self.on_line,
            "sigma1_degenerate": None if r is None else r.sigma1_degenerate,
            "tau1_degenerate": None if r is None else r.tau1_degenerate,
        }
        return rec


def _close(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol


def _same_coefficient(a: complex, b: complex, tol_real: float) -> bool:
    return abs(a - b) <= tol_real * max(1.0, abs(a), abs(b))


def classify(p: BEParams, tol: float = 1e-9, tol_real: float = TOL_REAL) -> Verdict:
    """Classify ``BE(k, l, alpha, beta, sigma, tau)``; the first matching rung wins."""
    k, l = p.k, p.l
    red = reduce(p, tol_real)
    s1, t1 = red.sigma1, red.tau1
    notes = []
    if red.near_tolerance:
        notes.append("a reduced symbol has |Im| within 10x of the realness tolerance")

    def verdict(status, basis, extra=None):
        if extra:
            notes.append(extra)
        return Verdict(status, basis, "; ".join(notes), red, on_line)

    on_line = on_homogeneity_line(p, tol)
    if not on_line:
        return verdict(Status.FAILS, Basis.HOMOGENEITY_LINE, "(alpha, beta) off the homogeneity line")

    crit = _close(p.alpha, (k - 1) / 2, tol) and _close(p.beta, (l - 1) / 2, tol)
    one_odd = k % 2 == 1 or l % 2 == 1
    sigma_eq_tau = _same_coefficient(p.sigma, p.tau, tol_real)

    if red.elliptic:
        if one_odd and crit and s1.imag * t1.imag > 0:
            return verdict(Status.HOLDS, Basis.THEOREM1)
        basis = Basis.COROLLARY1 if sigma_eq_tau else Basis.THEOREM1
        if not one_odd:
            why = "both orders even"
        elif not crit:
            why = "(alpha, beta) is not the critical pair ((k-1)/2, (l-1)/2)"
        else:
            why = "reduced symbols have imaginary parts of opposite sign"
        return verdict(Status.FAILS, basis, why)

    if sigma_eq_tau and k != l:
        return verdict(Status.FAILS, Basis.LEMMA1)

    both_real = is_real(s1, tol_real) and is_real(t1, tol_real)
    distinct = not _same_coefficient(s1, t1, tol_real)
    if k != l and one_odd and both_real and distinct and crit:
        return verdict(
            Status.HOLDS, Basis.THEOREM2,
            "distinct reduced symbols required (the residue split divides by sigma1 - tau1)",
        )

    if (
        k % 2 == 0 and l % 2 == 0 and ((k // 2) % 2 + (l // 2) % 2 == 1)
        and both_real and s1.real > 0 and t1.real > 0 and distinct
    ):
        corners = ((0.75 * k - 0.5, 0.25 * l - 0.5), (0.25 * k - 0.5, 0.75 * l - 0.5))
        if any(_close(p.alpha, a, tol) and _close(p.beta, b, tol) for a, b in corners):
            return verdict(Status.HOLDS, Basis.COROLLARY2)

    if k == l:
        thm2_like = one_odd and both_real and distinct and crit
        cor2_like = False  # needs exactly one of k/2, l/2 odd, impossible when k == l
        if sigma_eq_tau or thm2_like or cor2_like:
            return verdict(Status.CLAIMED, Basis.REMARK_K_EQUALS_L, "asserted for k = l without proof")

    return verdict(Status.UNKNOWN, Basis.NOT_COVERED)
