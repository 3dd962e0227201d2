"""Weaving stability under synthesis-operator perturbations.

Members of a family are compared through their extended synthesis matrices
(block column j of member i is sqrt(mass_j) v_i(j) P_i(j)); the distance
between two members is the operator norm of the matrix difference.  When
every member stays close to a reference member, or consecutive members stay
close along a chain, the family is woven with an explicit lower bound, and
the certifiers check that bound against exhaustive enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hilbert import InputError
from .frames import FrameBounds, fusion_bounds, synthesis_matrix
from .weaving import (
    Certificate,
    Exhaustive,
    Strategy,
    WovenFamily,
    _floor,
    universal_bounds,
)

DEFAULT_HYPOTHESIS_SLACK = 1e-10


def synthesis_distance(family: WovenFamily, i: int, k: int) -> float:
    """Operator norm of the difference of two members' synthesis matrices."""
    m = family.member_count
    if not (0 <= i < m and 0 <= k < m):
        raise InputError("member index out of range")
    Ti = synthesis_matrix(family.members[i])
    Tk = synthesis_matrix(family.members[k])
    return float(np.linalg.norm(Ti - Tk, 2))


def _scalar_array(values, length: int, name: str) -> np.ndarray:
    a = np.asarray(values, dtype=np.float64)
    if a.shape != (length,):
        raise InputError(f"{name} must have {length} entries, got shape {a.shape}")
    if not np.all(np.isfinite(a)) or np.any(a < 0):
        raise InputError(f"{name} entries must be finite and nonnegative")
    return a


@dataclass(frozen=True, eq=False)
class ReferenceScalars:
    """Per-member closeness scalars against one reference member.

    For member i != reference the hypothesis is
    distance(reference, i) <= eta_i * sqrt(B_ref) + gamma_i * sqrt(B_i) + lam_i;
    entries at the reference index are ignored.
    """

    reference: int
    lam: np.ndarray
    eta: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        m = len(np.asarray(self.lam, dtype=np.float64))
        if not 0 <= self.reference < m:
            raise InputError("reference member index out of range")
        for name in ("lam", "eta", "gamma"):
            object.__setattr__(
                self, name, _scalar_array(getattr(self, name), m, name)
            )

    @property
    def member_count(self) -> int:
        return int(self.lam.size)


@dataclass(frozen=True, eq=False)
class ChainScalars:
    """Closeness scalars for consecutive member pairs (i, i+1).

    Entry i covers the pair (i, i+1), so the arrays have one entry fewer
    than the family has members.
    """

    lam: np.ndarray
    eta: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        n = len(np.asarray(self.lam, dtype=np.float64))
        if n < 1:
            raise InputError("chain scalars need at least one pair")
        for name in ("lam", "eta", "gamma"):
            object.__setattr__(
                self, name, _scalar_array(getattr(self, name), n, name)
            )

    @property
    def pair_count(self) -> int:
        return int(self.lam.size)


def default_scalars(family: WovenFamily, reference: int) -> ReferenceScalars:
    """Exact-distance instantiation: lam_i = distance(reference, i), eta = gamma = 0."""
    m = family.member_count
    if not 0 <= reference < m:
        raise InputError("reference member index out of range")
    lam = np.zeros(m)
    for i in range(m):
        if i != reference:
            lam[i] = synthesis_distance(family, reference, i)
    return ReferenceScalars(reference, lam, np.zeros(m), np.zeros(m))


def default_chain_scalars(family: WovenFamily) -> ChainScalars:
    """Exact-distance instantiation for consecutive pairs."""
    n = family.member_count - 1
    lam = np.array([synthesis_distance(family, i, i + 1) for i in range(n)])
    return ChainScalars(lam, np.zeros(n), np.zeros(n))


def perturbation_lower_bound(
    family: WovenFamily, scalars: ReferenceScalars
) -> float:
    """A_ref minus the accumulated perturbation terms; may be nonpositive."""
    if scalars.member_count != family.member_count:
        raise InputError("scalar arrays do not match the member count")
    bounds = [fusion_bounds(F) for F in family.members]
    ref = scalars.reference
    sb_ref = np.sqrt(bounds[ref].upper)
    total = 0.0
    for i in range(family.member_count):
        if i == ref:
            continue
        sb_i = np.sqrt(bounds[i].upper)
        total += (
            scalars.lam[i] + scalars.eta[i] * sb_ref + scalars.gamma[i] * sb_i
        ) * (sb_ref + sb_i)
    return float(bounds[ref].lower - total)


def chain_lower_bound(family: WovenFamily, scalars: ChainScalars) -> float:
    """A_0 minus the accumulated consecutive-pair perturbation terms."""
    if scalars.pair_count != family.member_count - 1:
        raise InputError("chain scalars need one entry per consecutive pair")
    bounds = [fusion_bounds(F) for F in family.members]
    total = 0.0
    for i in range(family.member_count - 1):
        sb_i = np.sqrt(bounds[i].upper)
        sb_j = np.sqrt(bounds[i + 1].upper)
        total += (
            scalars.lam[i] + scalars.eta[i] * sb_i + scalars.gamma[i] * sb_j
        ) * (sb_i + sb_j)
    return float(bounds[0].lower - total)


def _frame_gate(family: WovenFamily) -> bool:
    return all(
        (b := fusion_bounds(F)).lower > _floor(b.upper) for F in family.members
    )


def certify_perturbation(
    family: WovenFamily,
    scalars: ReferenceScalars | None = None,
    reference: int = 0,
    strategy: Strategy = Exhaustive(),
    tol: float = 1e-8,
    slack: float = DEFAULT_HYPOTHESIS_SLACK,
    collect_spectrum: bool = False,
) -> Certificate:
    """Members close to a reference weave with an explicit lower bound.

    Hypothesis gate: for every i != reference, the synthesis distance to the
    reference is at most eta_i sqrt(B_ref) + gamma_i sqrt(B_i) + lam_i (plus
    slack).  The claimed bounds are (perturbation lower bound, sum of member
    uppers) and are checked against exhaustive enumeration.
    """
    if scalars is None:
        scalars = default_scalars(family, reference)
    if scalars.member_count != family.member_count:
        raise InputError("scalar arrays do not match the member count")
    ref = scalars.reference
    bounds = [fusion_bounds(F) for F in family.members]
    sb = [np.sqrt(b.upper) for b in bounds]
    margins = {}
    ok = True
    for i in range(family.member_count):
        if i == ref:
            continue
        dist = synthesis_distance(family, ref, i)
        allowed = (
            scalars.eta[i] * sb[ref] + scalars.gamma[i] * sb[i] + scalars.lam[i]
        )
        margins[str(i)] = float(allowed - dist)
        if dist > allowed + slack:
            ok = False
    lower = perturbation_lower_bound(family, scalars)
    upper_sum = float(sum(b.upper for b in bounds))
    hyp: dict = {
        "reference": int(ref),
        "hypothesis_margins": margins,
        "lower_formula": lower,
        "upper_sum": upper_sum,
        "reference_lower": bounds[ref].lower,
    }
    if not ok:
        return Certificate(
            check="perturbation", verdict="inapplicable", hypothesis=hyp,
            claimed=None, observed=None,
            notes="synthesis distance exceeds the allowed perturbation",
        )
    if not _frame_gate(family):
        return Certificate(
            check="perturbation", verdict="inapplicable", hypothesis=hyp,
            claimed=None, observed=None,
            notes="a member is not a frame (lower bound is numerically zero)",
        )
    if lower <= 0.0:
        return Certificate(
            check="perturbation", verdict="inapplicable", hypothesis=hyp,
            claimed=None, observed=None,
            notes="perturbation lower bound is nonpositive (inconclusive)",
        )
    claimed = FrameBounds(lower, upper_sum)
    observed = universal_bounds(family, strategy, collect_spectrum=collect_spectrum)
    verdict = (
        "pass"
        if claimed.lower <= observed.lower + tol
        and claimed.upper >= observed.upper - tol
        else "fail"
    )
    return Certificate(
        check="perturbation", verdict=verdict, hypothesis=hyp,
        claimed=claimed, observed=observed,
    )


def certify_perturbation_chain(
    family: WovenFamily,
    scalars: ChainScalars | None = None,
    strategy: Strategy = Exhaustive(),
    tol: float = 1e-8,
    slack: float = DEFAULT_HYPOTHESIS_SLACK,
    collect_spectrum: bool = False,
) -> Certificate:
    """Consecutive-pair closeness implies weaving, anchored at the first member."""
    if scalars is None:
        scalars = default_chain_scalars(family)
    if scalars.pair_count != family.member_count - 1:
        raise InputError("chain scalars need one entry per consecutive pair")
    bounds = [fusion_bounds(F) for F in family.members]
    sb = [np.sqrt(b.upper) for b in bounds]
    margins = {}
    ok = True
    for i in range(family.member_count - 1):
        dist = synthesis_distance(family, i, i + 1)
        allowed = (
            scalars.eta[i] * sb[i] + scalars.gamma[i] * sb[i + 1] + scalars.lam[i]
        )
        margins[f"{i}-{i + 1}"] = float(allowed - dist)
        if dist > allowed + slack:
            ok = False
    lower = chain_lower_bound(family, scalars)
    upper_sum = float(sum(b.upper for b in bounds))
    hyp: dict = {
        "hypothesis_margins": margins,
        "lower_formula": lower,
        "upper_sum": upper_sum,
        "first_lower": bounds[0].lower,
    }
    if not ok:
        return Certificate(
            check="perturbation_chain", verdict="inapplicable", hypothesis=hyp,
            claimed=None, observed=None,
            notes="synthesis distance exceeds the allowed perturbation",
        )
    if not _frame_gate(family):
        return Certificate(
            check="perturbation_chain", verdict="inapplicable", hypothesis=hyp,
            claimed=None, observed=None,
            notes="a member is not a frame (lower bound is numerically zero)",
        )
    if lower <= 0.0:
        return Certificate(
            check="perturbation_chain", verdict="inapplicable", hypothesis=hyp,
            claimed=None, observed=None,
            notes="chain lower bound is nonpositive (inconclusive)",
        )
    claimed = FrameBounds(lower, upper_sum)
    observed = universal_bounds(family, strategy, collect_spectrum=collect_spectrum)
    verdict = (
        "pass"
        if claimed.lower <= observed.lower + tol
        and claimed.upper >= observed.upper - tol
        else "fail"
    )
    return Certificate(
        check="perturbation_chain", verdict=verdict, hypothesis=hyp,
        claimed=claimed, observed=observed,
    )
