"""Weavings of fusion-frame families and certified universal bounds.

A woven family is a list of fusion frames over one shared measure space.
Every partition of the nodes into one block per member induces a weaving
operator (each node contributes the term of the member owning its block),
and the universal bounds are the extremes of those operators' spectra over
all partitions.  Exhaustive enumeration certifies the bounds; sampled and
descent searches are cheaper but explicitly uncertified.

The certifiers check quantitative statements about woven families (bound
arithmetic under sums, operator images, subspace intersections, node-subset
restriction and removal, closeness of members, and lifted products) against
the enumerated ground truth, and return Certificate values with verdict
pass / fail / inapplicable plus the hypothesis numbers that drove the
decision.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .hilbert import (
    DEFAULT_ENUM_BUDGET,
    DEFAULT_RANK_TOL,
    BudgetExceededError,
    InputError,
    MeasureSpace,
    Partition,
    Subspace,
    as_operator,
    image_subspace,
    intersect_subspaces,
    min_dominance_scale,
    normalize_nodes,
    operator_norm,
    projector,
    pseudo_inverse,
    range_subspace,
)
from .frames import (
    CFrame,
    CFusionFrame,
    FrameBounds,
    bounds_of_operator,
    cframe_operator,
    cfusion_from_cframe,
    fusion_bounds,
    fusion_node_terms,
)

DEFAULT_BRACKET_TOL = 1e-8
DEFAULT_GATE_TOL = 1e-8
FRAME_FLOOR = 1e-9
SPECTRUM_CAP = 4096
_CHUNK = 2048


@dataclass(frozen=True)
class Exhaustive:
    """Enumerate every assignment (certified); refuses above the budget."""

    budget: int = DEFAULT_ENUM_BUDGET


@dataclass(frozen=True)
class Sampled:
    """Evaluate ``count`` uniformly random assignments (uncertified)."""

    count: int
    seed: int = 0


@dataclass(frozen=True)
class Descent:
    """Restarted first-improvement single-node flips (uncertified)."""

    restarts: int
    seed: int = 0


Strategy = Exhaustive | Sampled | Descent


@dataclass(frozen=True, eq=False)
class WovenFamily:
    """Two or more fusion frames sharing one measure space and dimension."""

    members: tuple[CFusionFrame, ...]

    def __post_init__(self):
        members = tuple(self.members)
        if len(members) < 2:
            raise InputError("a woven family needs at least two members")
        first = members[0]
        for F in members[1:]:
            if not F.space.same_nodes(first.space):
                raise InputError("family members live on different measure spaces")
            if F.dim != first.dim:
                raise InputError("family members have different ambient dimensions")
        object.__setattr__(self, "members", members)

    @property
    def member_count(self) -> int:
        return len(self.members)

    @property
    def node_count(self) -> int:
        return self.members[0].node_count

    @property
    def dim(self) -> int:
        return self.members[0].dim

    @property
    def space(self) -> MeasureSpace:
        return self.members[0].space

    def node_terms(self) -> np.ndarray:
        """Array (members, nodes, d, d) of mass_j * v_i(j)^2 * P_i(j)."""
        return np.stack([fusion_node_terms(F) for F in self.members])

    def restrict(self, nodes: Sequence[int]) -> "WovenFamily":
        return WovenFamily(tuple(F.restrict(nodes) for F in self.members))


def family_from_cframes(
    frames: Sequence[CFrame], rank_tol: float = DEFAULT_RANK_TOL
) -> WovenFamily:
    """Bridge a list of vector frames to the rank-one fusion family."""
    return WovenFamily(tuple(cfusion_from_cframe(f, rank_tol) for f in frames))


@dataclass(frozen=True, eq=False)
class UniversalBounds:
    """Extremes of the weaving spectra over partitions, with witnesses.

    ``certified`` is True only for exhaustive enumeration.  ``spectrum``
    optionally carries the per-partition (smallest, largest) eigenvalues in
    enumeration order, when collected.
    """

    lower: float
    upper: float
    lower_witness: Partition
    upper_witness: Partition
    certified: bool
    spectrum: tuple[np.ndarray, np.ndarray] | None = None

    def as_tuple(self) -> tuple[float, float]:
        return (self.lower, self.upper)


def weaving_operator(family: WovenFamily, partition: Partition) -> np.ndarray:
    """Sum over nodes of the owning member's term."""
    if partition.block_count != family.member_count:
        raise InputError(
            f"partition has {partition.block_count} blocks for "
            f"{family.member_count} members"
        )
    if partition.node_count != family.node_count:
        raise InputError("partition does not cover the family's nodes")
    terms = family.node_terms()
    return terms[partition.assignment, np.arange(family.node_count)].sum(axis=0)


def weaving_bounds(family: WovenFamily, partition: Partition) -> FrameBounds:
    return bounds_of_operator(weaving_operator(family, partition))


def _assignments_range(
    node_count: int, block_count: int, start: int, stop: int
) -> np.ndarray:
    """Assignments start..stop-1 in lexicographic order (node 0 most significant)."""
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((idx.size, node_count), dtype=np.int64)
    for j in range(node_count - 1, -1, -1):
        out[:, j] = idx % block_count
        idx //= block_count
    return out


def _lex_order(rows: np.ndarray) -> np.ndarray:
    return np.lexsort(rows.T[::-1])


class _ExtremeTracker:
    """Running min/max with first-seen (lexicographically smallest) witnesses."""

    def __init__(self):
        self.lower = np.inf
        self.upper = -np.inf
        self.lower_witness: np.ndarray | None = None
        self.upper_witness: np.ndarray | None = None

    def update(self, assigns: np.ndarray, lows: np.ndarray, highs: np.ndarray):
        i = int(np.argmin(lows))
        if lows[i] < self.lower:
            self.lower = float(lows[i])
            self.lower_witness = assigns[i].copy()
        j = int(np.argmax(highs))
        if highs[j] > self.upper:
            self.upper = float(highs[j])
            self.upper_witness = assigns[j].copy()


def _eval_chunk(terms: np.ndarray, assigns: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = terms.shape[1]
    S = terms[assigns, np.arange(n)].sum(axis=1)
    w = np.linalg.eigvalsh(S)
    return w[:, 0], w[:, -1]


def _universal_of_terms(
    terms: np.ndarray,
    strategy: Strategy,
    collect_spectrum: bool = False,
) -> UniversalBounds:
    """Shared enumeration engine over per-member-per-node operator terms."""
    m, n = terms.shape[0], terms.shape[1]
    if terms.shape[2] == 0:
        raise InputError("cannot enumerate weavings on a zero-dimensional space")
    tracker = _ExtremeTracker()
    spec_lo: list[np.ndarray] = []
    spec_hi: list[np.ndarray] = []

    if isinstance(strategy, Exhaustive):
        total = m**n
        if total > strategy.budget:
            raise BudgetExceededError(
                f"{m}^{n} = {total} assignments exceed the budget of "
                f"{strategy.budget}; raise the budget or use sampled/descent search"
            )
        collect_spectrum = collect_spectrum and total <= SPECTRUM_CAP
        for start in range(0, total, _CHUNK):
            assigns = _assignments_range(n, m, start, min(start + _CHUNK, total))
            lows, highs = _eval_chunk(terms, assigns)
            tracker.update(assigns, lows, highs)
            if collect_spectrum:
                spec_lo.append(lows)
                spec_hi.append(highs)
        certified = True
    elif isinstance(strategy, Sampled):
        if strategy.count < 1:
            raise InputError("sample count must be positive")
        collect_spectrum = collect_spectrum and strategy.count <= SPECTRUM_CAP
        rng = np.random.default_rng(strategy.seed)
        assigns = rng.integers(0, m, size=(strategy.count, n))
        assigns = assigns[_lex_order(assigns)]
        for start in range(0, strategy.count, _CHUNK):
            chunk = assigns[start : start + _CHUNK]
            lows, highs = _eval_chunk(terms, chunk)
            tracker.update(chunk, lows, highs)
            if collect_spectrum:
                spec_lo.append(lows)
                spec_hi.append(highs)
        certified = False
    elif isinstance(strategy, Descent):
        if strategy.restarts < 1:
            raise InputError("descent needs at least one restart")
        arange = np.arange(n)
        for mode in ("lower", "upper"):
            for r in range(strategy.restarts):
                rng = np.random.default_rng([strategy.seed, r])
                assign = rng.integers(0, m, size=n)
                order = rng.permutation(n)
                S = terms[assign, arange].sum(axis=0)
                w = np.linalg.eigvalsh(S)
                val = float(w[0] if mode == "lower" else w[-1])
                improved = True
                while improved:
                    improved = False
                    for j in order:
                        for b in range(m):
                            if b == assign[j]:
                                continue
                            S2 = S - terms[assign[j], j] + terms[b, j]
                            w2 = np.linalg.eigvalsh(S2)
                            v2 = float(w2[0] if mode == "lower" else w2[-1])
                            if (mode == "lower" and v2 < val) or (
                                mode == "upper" and v2 > val
                            ):
                                S, val, improved = S2, v2, True
                                assign[j] = b
                                break
                better = (
                    val < tracker.lower if mode == "lower" else val > tracker.upper
                )
                tie = (
                    val == tracker.lower
                    and tracker.lower_witness is not None
                    and tuple(assign) < tuple(tracker.lower_witness)
                    if mode == "lower"
                    else val == tracker.upper
                    and tracker.upper_witness is not None
                    and tuple(assign) < tuple(tracker.upper_witness)
                )
                if better or tie:
                    if mode == "lower":
                        tracker.lower = val
                        tracker.lower_witness = assign.copy()
                    else:
                        tracker.upper = val
                        tracker.upper_witness = assign.copy()
        certified = False
    else:
        raise InputError(f"unknown search strategy {strategy!r}")

    assert tracker.lower_witness is not None and tracker.upper_witness is not None
    spectrum = None
    if collect_spectrum and spec_lo:
        spectrum = (np.concatenate(spec_lo), np.concatenate(spec_hi))
    out = UniversalBounds(
        lower=max(tracker.lower, 0.0),
        upper=max(tracker.upper, 0.0),
        lower_witness=Partition(m, tracker.lower_witness),
        upper_witness=Partition(m, tracker.upper_witness),
        certified=certified,
        spectrum=spectrum,
    )
    _verify_witnesses(terms, out)
    return out


def _compress_terms(terms: np.ndarray, Q: np.ndarray) -> np.ndarray:
    return np.einsum("ab,ijbc,cd->ijad", Q.conj().T, terms, Q, optimize=True)


def universal_bounds(
    family: WovenFamily,
    strategy: Strategy = Exhaustive(),
    compress: Subspace | None = None,
    collect_spectrum: bool = False,
) -> UniversalBounds:
    """Extremes of the weaving spectra over partitions.

    With ``compress`` the weaving operators are first compressed to the given
    subspace (Q^H S Q), which computes bounds of the family restricted to
    that subspace.
    """
    terms = family.node_terms()
    if compress is not None:
        if compress.ambient_dim != family.dim:
            raise InputError("compression subspace has the wrong ambient dimension")
        if compress.dim == 0:
            raise InputError("compression subspace is trivial")
        terms = _compress_terms(terms, compress.basis)
    return _universal_of_terms(terms, strategy, collect_spectrum)


@dataclass(frozen=True, eq=False)
class Certificate:
    """Verdict of checking one quantitative statement on one family.

    ``claimed`` holds the statement's asserted bounds, ``observed`` the
    enumerated ground truth it was compared against, and ``bounds_family``
    names the family the ground truth was computed on (``original`` or a
    transformed family such as ``image`` or ``restricted``).  ``hypothesis``
    records the numbers that drove gating and the claim.
    """

    check: str
    verdict: str
    hypothesis: dict
    claimed: FrameBounds | None
    observed: UniversalBounds | None
    bounds_family: str = "original"
    notes: str = ""

    def to_dict(self) -> dict:
        out: dict = {
            "check": self.check,
            "verdict": self.verdict,
            "hypothesis": _jsonable(self.hypothesis),
        }
        if self.claimed is not None:
            out["claimed"] = {"lower": self.claimed.lower, "upper": self.claimed.upper}
        if self.observed is not None:
            ob: dict = {
                "lower": self.observed.lower,
                "upper": self.observed.upper,
                "lower_witness": self.observed.lower_witness.as_list(),
                "upper_witness": self.observed.upper_witness.as_list(),
                "certified": self.observed.certified,
                "family": self.bounds_family,
            }
            if self.observed.spectrum is not None:
                ob["spectrum"] = {
                    "lower": [float(x) for x in self.observed.spectrum[0]],
                    "upper": [float(x) for x in self.observed.spectrum[1]],
                }
            out["observed"] = ob
        if self.notes:
            out["notes"] = self.notes
        return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        # JSON has no Infinity/NaN; gate values can legitimately be infinite
        return x if np.isfinite(x) else repr(x)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    return obj


def _floor(upper: float) -> float:
    return FRAME_FLOOR * max(1.0, upper)


def _verify_witnesses(terms: np.ndarray, ub: UniversalBounds, tol: float = 1e-9):
    """Defensive self-check: witnesses reproduce the reported extremes."""
    n = terms.shape[1]
    for wit, val, pick in (
        (ub.lower_witness, ub.lower, 0),
        (ub.upper_witness, ub.upper, -1),
    ):
        S = terms[wit.assignment, np.arange(n)].sum(axis=0)
        w = np.linalg.eigvalsh(S)
        got = max(float(w[pick]), 0.0)
        scale = max(1.0, abs(val))
        if abs(got - val) > tol * scale:
            raise AssertionError(
                f"witness recomputation drifted: {got} vs reported {val}"
            )


def _bracket_verdict(
    claimed: FrameBounds, observed: UniversalBounds, tol: float
) -> str:
    ok = (
        claimed.lower <= observed.lower + tol
        and claimed.upper >= observed.upper - tol
    )
    return "pass" if ok else "fail"


def certify_bessel_sum(
    family: WovenFamily,
    strategy: Strategy = Exhaustive(),
    tol: float = DEFAULT_BRACKET_TOL,
    collect_spectrum: bool = False,
) -> Certificate:
    """Every weaving stays below the sum of the members' upper bounds."""
    uppers = [fusion_bounds(F).upper for F in family.members]
    claimed = FrameBounds(0.0, float(sum(uppers)))
    observed = universal_bounds(family, strategy, collect_spectrum=collect_spectrum)
    return Certificate(
        check="bessel_sum",
        verdict=_bracket_verdict(claimed, observed, tol),
        hypothesis={"member_uppers": uppers, "upper_sum": claimed.upper},
        claimed=claimed,
        observed=observed,
    )


def certify_operator_image(
    family: WovenFamily,
    operator,
    assumed: UniversalBounds | None = None,
    strategy: Strategy = Exhaustive(),
    tol: float = DEFAULT_BRACKET_TOL,
    rank_tol: float = DEFAULT_RANK_TOL,
    collect_spectrum: bool = False,
) -> Certificate:
    """Pushing a woven family through an operator scales its universal bounds.

    The image family (spanned by U applied to each node subspace) is woven on
    range(U) with lower A / (||U+||^2 ||U||^2) and upper B * ||U+||^2 ||U||^2;
    the enumerated bounds are computed compressed to range(U).
    """
    U = as_operator(operator, "operator")
    if U.shape != (family.dim, family.dim):
        raise InputError(
            f"operator must be {family.dim}x{family.dim}, got {U.shape}"
        )
    if assumed is None:
        assumed = universal_bounds(family, strategy)
    norm_u = operator_norm(U)
    hyp: dict = {"operator_norm": norm_u, "assumed_lower": assumed.lower,
                 "assumed_upper": assumed.upper, "assumed_certified": assumed.certified}
    if norm_u == 0.0:
        return Certificate(
            check="operator_image", verdict="inapplicable", hypothesis=hyp,
            claimed=None, observed=None, notes="zero operator has a trivial range",
        )
    if assumed.lower <= _floor(assumed.upper):
        return Certificate(
            check="operator_image", verdict="inapplicable", hypothesis=hyp,
            claimed=None, observed=None,
            notes="family is not woven (universal lower bound is numerically zero)",
        )
    pinv = pseudo_inverse(U, rank_tol)
    norm_pinv = operator_norm(pinv)
    rng_sub = range_subspace(U, rank_tol)
    hyp.update({"pseudo_inverse_norm": norm_pinv, "range_dim": rng_sub.dim})
    image_members = tuple(
        CFusionFrame(
            F.space,
            tuple(image_subspace(U, V, rank_tol) for V in F.subspaces),
            F.weights,
        )
        for F in family.members
    )
    image_family = WovenFamily(image_members)
    observed = universal_bounds(
        image_family, strategy, compress=rng_sub, collect_spectrum=collect_spectrum
    )
    scale = norm_pinv**2 * norm_u**2
    claimed = FrameBounds(assumed.lower / scale, assumed.upper * scale)
    notes = "" if assumed.certified and observed.certified else "uncertified search"
    return Certificate(
        check="operator_image",
        verdict=_bracket_verdict(claimed, observed, tol),
        hypothesis=hyp,
        claimed=claimed,
        observed=observed,
        bounds_family="image",
        notes=notes,
    )


def certify_subspace_intersection(
    family: WovenFamily,
    W: Subspace,
    strategy: Strategy = Exhaustive(),
    gate_tol: float = DEFAULT_GATE_TOL,
    tol: float = DEFAULT_BRACKET_TOL,
    collect_spectrum: bool = False,
) -> Certificate:
    """Intersecting every node subspace with W keeps the bounds, on W.

    Only sound when W's projector commutes with every node projector; the
    commutation gate makes generic instances inapplicable rather than falsely
    certified.
    """
    if family.member_count != 2:
        raise InputError("subspace intersection check expects exactly two members")
    if W.ambient_dim != family.dim:
        raise InputError("subspace has the wrong ambient dimension")
    PW = projector(W)
    worst = 0.0
    for F in family.members:
        for V in F.subspaces:
            PV = projector(V)
            worst = max(worst, operator_norm(PV @ PW - PW @ PV))
    hyp: dict = {"max_commutator_norm": worst, "subspace_dim": W.dim}
    if W.dim == 0:
        return Certificate(
            check="subspace_intersection", verdict="inapplicable", hypothesis=hyp,
            claimed=None, observed=None, notes="intersecting subspace is trivial",
        )
    if worst > gate_tol:
        return Certificate(
            check="subspace_intersection", verdict="inapplicable", hypothesis=hyp,
            claimed=None, observed=None,
            notes="projector does not commute with every node projector",
        )
    assumed = universal_bounds(family, strategy)
    hyp.update({"assumed_lower": assumed.lower, "assumed_upper": assumed.upper})
    if assumed.lower <= _floor(assumed.upper):
        return Certificate(
            check="subspace_intersection", verdict="inapplicable", hypothesis=hyp,
            claimed=None, observed=None,
            notes="family is not woven (universal lower bound is numerically zero)",
        )
    intersected = WovenFamily(
        tuple(
            CFusionFrame(
                F.space,
                tuple(intersect_subspaces(V, W) for V in F.subspaces),
                F.weights,
            )
            for F in family.members
        )
    )
    observed = universal_bounds(
        intersected, strategy, compress=W, collect_spectrum=collect_spectrum
    )
    claimed = FrameBounds(assumed.lower, assumed.upper)
    return Certificate(
        check="subspace_intersection",
        verdict=_bracket_verdict(claimed, observed, tol),
        hypothesis=hyp,
        claimed=claimed,
        observed=observed,
        bounds_family="intersected",
    )


def certify_subset_extension(
    family: WovenFamily,
    nodes: Sequence[int],
    strategy: Strategy = Exhaustive(),
    tol: float = DEFAULT_BRACKET_TOL,
    collect_spectrum: bool = False,
) -> Certificate:
    """A woven restriction extends to the full node set.

    If the family restricted to the given nodes is woven with lower bound
    A_Y, the full family is woven with bounds (A_Y, sum of member uppers).
    """
    idx = normalize_nodes(nodes, family.node_count)
    restricted = family.restrict(idx)
    rest = universal_bounds(restricted, strategy)
    uppers = [fusion_bounds(F).upper for F in family.members]
    hyp: dict = {
        "nodes": [int(i) for i in idx],
        "restricted_lower": rest.lower,
        "restricted_upper": rest.upper,
        "upper_sum": float(sum(uppers)),
    }
    if rest.lower <= _floor(rest.upper):
        return Certificate(
            check="subset_extension", verdict="inapplicable", hypothesis=hyp,
            claimed=None, observed=None,
            notes="restricted family is not woven (lower bound is numerically zero)",
        )
    claimed = FrameBounds(rest.lower, float(sum(uppers)))
    observed = universal_bounds(family, strategy, collect_spectrum=collect_spectrum)
    return Certificate(
        check="subset_extension",
        verdict=_bracket_verdict(claimed, observed, tol),
        hypothesis=hyp,
        claimed=claimed,
        observed=observed,
    )


def removal_mass(
    family: WovenFamily, nodes: Sequence[int], reference: int
) -> float:
    """Largest eigenvalue of the non-reference members' mass outside ``nodes``."""
    if not 0 <= reference < family.member_count:
        raise InputError("reference member index out of range")
    idx = normalize_nodes(nodes, family.node_count)
    removed = np.setdiff1d(np.arange(family.node_count), idx)
    if removed.size == 0:
        return 0.0
    terms = family.node_terms()
    S = np.zeros((family.dim, family.dim), dtype=np.complex128)
    for i in range(family.member_count):
        if i == reference:
            continue
        S += terms[i, removed].sum(axis=0)
    w = np.linalg.eigvalsh((S + S.conj().T) / 2.0)
    return max(float(w[-1]), 0.0)


def certify_removal(
    family: WovenFamily,
    nodes: Sequence[int],
    reference: int,
    removed_mass: float | None = None,
    strategy: Strategy = Exhaustive(),
    tol: float = DEFAULT_BRACKET_TOL,
    collect_spectrum: bool = False,
) -> Certificate:
    """Deleting nodes of small spectral mass keeps the family woven.

    With D the removed-mass extreme (or a user value, clamped up to it) and
    (A, B) the full universal bounds, D < A implies the restriction to the
    kept nodes is woven with bounds (A - D, B).
    """
    idx = normalize_nodes(nodes, family.node_count)
    full = universal_bounds(family, strategy)
    d_opt = removal_mass(family, idx, reference)
    clamped = False
    d_eff = d_opt
    if removed_mass is not None:
        if removed_mass < d_opt:
            clamped = True
        d_eff = max(float(removed_mass), d_opt)
    hyp: dict = {
        "nodes": [int(i) for i in idx],
        "reference": int(reference),
        "removed_mass": d_eff,
        "removed_mass_optimal": d_opt,
        "full_lower": full.lower,
        "full_upper": full.upper,
    }
    notes = "user removal mass clamped up to the optimal value" if clamped else ""
    if full.lower <= _floor(full.upper):
        return Certificate(
            check="removal", verdict="inapplicable", hypothesis=hyp,
            claimed=None, observed=None,
            notes="family is not woven (universal lower bound is numerically zero)",
        )
    if d_eff >= full.lower:
        return Certificate(
            check="removal", verdict="inapplicable", hypothesis=hyp,
            claimed=None, observed=None,
            notes="removed mass is not below the universal lower bound",
        )
    claimed = FrameBounds(full.lower - d_eff, full.upper)
    restricted = family.restrict(idx)
    observed = universal_bounds(
        restricted, strategy, collect_spectrum=collect_spectrum
    )
    return Certificate(
        check="removal",
        verdict=_bracket_verdict(claimed, observed, tol),
        hypothesis=hyp,
        claimed=claimed,
        observed=observed,
        bounds_family="restricted",
        notes=notes,
    )


def closeness_scale(family: WovenFamily, feas_tol: float = 1e-9) -> float:
    """Smallest N bounding the per-node member discrepancies.

    For every node j and member pair (i, k), with M the squared discrepancy
    (v_i P_i - v_k P_k)^H (v_i P_i - v_k P_k) at node j, both M <= N v_i^2 P_i
    and M <= N v_k^2 P_k must hold.  Returns inf when no finite N works
    (discrepancy leaking outside a node subspace).
    """
    worst = 0.0
    for j in range(family.node_count):
        mats = []
        for F in family.members:
            mats.append((float(F.weights[j]), projector(F.subspaces[j])))
        for i in range(len(mats)):
            vi, Pi = mats[i]
            for k in range(i + 1, len(mats)):
                vk, Pk = mats[k]
                Dif = vi * Pi - vk * Pk
                M = Dif.conj().T @ Dif
                for v, P in ((vi, Pi), (vk, Pk)):
                    a = min_dominance_scale(M, (v * v) * P, feas_tol=feas_tol)
                    if not np.isfinite(a):
                        return float("inf")
                    worst = max(worst, a)
    return worst


def certify_closeness(
    family: WovenFamily,
    scale: float | None = None,
    strategy: Strategy = Exhaustive(),
    tol: float = DEFAULT_BRACKET_TOL,
    collect_spectrum: bool = False,
) -> Certificate:
    """Members that stay N-close weave with explicit universal bounds.

    Claimed lower is sum(A_i) / ((m-1)(1+sqrt(N))^2 + 1); claimed upper is
    sum(B_i).  A user-supplied N is clamped up to the optimal one.
    """
    n_opt = closeness_scale(family)
    clamped = False
    n_eff = n_opt
    if scale is not None:
        if scale < n_opt:
            clamped = True
        n_eff = max(float(scale), n_opt)
    member_bounds = [fusion_bounds(F) for F in family.members]
    lower_sum = float(sum(b.lower for b in member_bounds))
    upper_sum = float(sum(b.upper for b in member_bounds))
    m = family.member_count
    hyp: dict = {
        "closeness": n_eff,
        "closeness_optimal": n_opt,
        "lower_sum": lower_sum,
        "upper_sum": upper_sum,
    }
    notes = "user closeness clamped up to the optimal value" if clamped else ""
    if not np.isfinite(n_eff):
        return Certificate(
            check="closeness", verdict="inapplicable", hypothesis=hyp,
            claimed=None, observed=None,
            notes="no finite closeness scale (node discrepancy leaves the subspaces)",
        )
    floors = [b.lower <= _floor(b.upper) for b in member_bounds]
    if any(floors):
        return Certificate(
            check="closeness", verdict="inapplicable", hypothesis=hyp,
            claimed=None, observed=None,
            notes="a member is not a frame (lower bound is numerically zero)",
        )
    denominator = (m - 1) * (1.0 + np.sqrt(n_eff)) ** 2 + 1.0
    hyp["denominator"] = float(denominator)
    claimed = FrameBounds(lower_sum / denominator, upper_sum)
    observed = universal_bounds(family, strategy, collect_spectrum=collect_spectrum)
    return Certificate(
        check="closeness",
        verdict=_bracket_verdict(claimed, observed, tol),
        hypothesis=hyp,
        claimed=claimed,
        observed=observed,
        notes=notes,
    )


def certify_upper_not_optimal(
    family: WovenFamily,
    strategy: Strategy = Exhaustive(),
    margin_rel: float = 1e-6,
    tol: float = DEFAULT_BRACKET_TOL,
    collect_spectrum: bool = False,
) -> Certificate:
    """The summed upper bound of a two-member family is not attained.

    Passes when the enumerated universal upper sits below B1 + B2 by more
    than margin_rel * (B1 + B2); a smaller nonnegative gap is inapplicable
    (degenerate instance), a negative gap beyond tolerance is a failure.
    """
    if family.member_count != 2:
        raise InputError("upper-not-optimal check expects exactly two members")
    b1, b2 = (fusion_bounds(F) for F in family.members)
    total = b1.upper + b2.upper
    margin = margin_rel * total
    observed = universal_bounds(family, strategy, collect_spectrum=collect_spectrum)
    gap = total - observed.upper
    hyp: dict = {
        "upper_sum": total,
        "gap": gap,
        "margin": margin,
        "member_uppers": [b1.upper, b2.upper],
    }
    claimed = FrameBounds(0.0, total)
    if gap < -tol:
        verdict = "fail"
        notes = "universal upper exceeds the summed member uppers"
    elif gap >= margin:
        verdict = "pass"
        notes = ""
    else:
        verdict = "inapplicable"
        notes = "gap below the margin; summed upper is (numerically) attained"
    return Certificate(
        check="upper_not_optimal", verdict=verdict, hypothesis=hyp,
        claimed=claimed, observed=observed, notes=notes,
    )


@dataclass(frozen=True, eq=False)
class LiftedProduct:
    """A family of vector frames lifted to constant-span fusion members.

    Member i of the fusion family assigns, at every outer node x, the span
    of the i-th inner frame with weight v_i(x); the matching product frame
    on the product of the outer and inner spaces has vectors v_i(x) f_i(y).
    """

    inner_frames: tuple[CFrame, ...]
    spans: tuple[Subspace, ...]
    inner_bounds: tuple[FrameBounds, ...]
    outer_space: MeasureSpace
    member_weights: np.ndarray
    fusion_family: WovenFamily
    product_frames: tuple[CFrame, ...]


def lift_product(
    inner_frames: Sequence[CFrame],
    outer_space: MeasureSpace,
    member_weights,
    rank_tol: float = DEFAULT_RANK_TOL,
) -> LiftedProduct:
    frames = tuple(inner_frames)
    if len(frames) < 2:
        raise InputError("product lift needs at least two inner frames")
    d = frames[0].dim
    if any(f.dim != d for f in frames):
        raise InputError("inner frames have different ambient dimensions")
    V = np.asarray(member_weights, dtype=np.float64)
    if V.shape != (len(frames), outer_space.node_count):
        raise InputError(
            "member weights must be (members, outer nodes) "
            f"= ({len(frames)}, {outer_space.node_count}), got {V.shape}"
        )
    if not np.all(np.isfinite(V)) or not np.all(V > 0):
        raise InputError("member weights must be finite and strictly positive")
    spans = []
    inner_bounds = []
    for f in frames:
        span = range_subspace(f.vectors.T, rank_tol)
        if span.dim == 0:
            raise InputError("an inner frame is entirely zero")
        S = cframe_operator(f)
        core = span.basis.conj().T @ S @ span.basis
        inner_bounds.append(bounds_of_operator(core))
        spans.append(span)
    members = tuple(
        CFusionFrame(outer_space, tuple([spans[i]] * outer_space.node_count), V[i])
        for i in range(len(frames))
    )
    product_frames = []
    for i, f in enumerate(frames):
        pw = np.outer(outer_space.weights, f.space.weights).ravel()
        vecs = np.repeat(V[i], f.node_count)[:, None] * np.tile(
            f.vectors, (outer_space.node_count, 1)
        )
        product_frames.append(CFrame(MeasureSpace(pw), vecs))
    return LiftedProduct(
        inner_frames=frames,
        spans=tuple(spans),
        inner_bounds=tuple(inner_bounds),
        outer_space=outer_space,
        member_weights=V,
        fusion_family=WovenFamily(members),
        product_frames=tuple(product_frames),
    )


def product_weaving_terms(lift: LiftedProduct) -> np.ndarray:
    """Per-member-per-outer-node terms of the product frames' weavings.

    A partition of the outer nodes carries each inner fiber with its outer
    node, so the weaving operator is sum_x mass_x v_i(x)^2 S_i with S_i the
    inner frame operator of the member owning x.
    """
    m = len(lift.inner_frames)
    n = lift.outer_space.node_count
    d = lift.inner_frames[0].dim
    terms = np.empty((m, n, d, d), dtype=np.complex128)
    for i, f in enumerate(lift.inner_frames):
        S = cframe_operator(f)
        coeff = lift.outer_space.weights * lift.member_weights[i] ** 2
        terms[i] = coeff[:, None, None] * S[None, :, :]
    return terms


def certify_product_equivalence(
    lift: LiftedProduct,
    strategy: Strategy = Exhaustive(),
    tol: float = DEFAULT_BRACKET_TOL,
    collect_spectrum: bool = False,
) -> Certificate:
    """Product frames weave exactly when the lifted fusion family weaves.

    With (C, D) the product-side universal bounds, (C', D') the fusion-side
    ones, A the least inner lower bound and B the largest inner upper bound:
    C' >= C/B, D' <= D/A, C >= A C', D <= B D', and the two woven verdicts
    agree.
    """
    a_min = min(b.lower for b in lift.inner_bounds)
    b_max = max(b.upper for b in lift.inner_bounds)
    fusion = universal_bounds(
        lift.fusion_family, strategy, collect_spectrum=collect_spectrum
    )
    product = _universal_of_terms(product_weaving_terms(lift), strategy)
    hyp: dict = {
        "inner_lower_min": a_min,
        "inner_upper_max": b_max,
        "product_lower": product.lower,
        "product_upper": product.upper,
        "product_lower_witness": product.lower_witness.as_list(),
        "product_upper_witness": product.upper_witness.as_list(),
    }
    if a_min <= _floor(b_max):
        return Certificate(
            check="product_equivalence", verdict="inapplicable", hypothesis=hyp,
            claimed=None, observed=None,
            notes="an inner frame is numerically degenerate on its span",
        )
    checks = {
        "fusion_lower_ge": fusion.lower >= product.lower / b_max - tol,
        "fusion_upper_le": fusion.upper <= product.upper / a_min + tol,
        "product_lower_ge": product.lower >= a_min * fusion.lower - tol,
        "product_upper_le": product.upper <= b_max * fusion.upper + tol,
    }
    floor_p = _floor(product.upper)
    floor_f = _floor(fusion.upper)
    woven_product = product.lower > floor_p
    woven_fusion = fusion.lower > floor_f
    checks["woven_agree"] = woven_product == woven_fusion
    hyp.update(
        {
            "relations": {k: bool(v) for k, v in checks.items()},
            "woven_product": bool(woven_product),
            "woven_fusion": bool(woven_fusion),
            "reverse_lower": a_min * fusion.lower,
            "reverse_upper": b_max * fusion.upper,
        }
    )
    claimed = FrameBounds(product.lower / b_max, product.upper / a_min)
    verdict = "pass" if all(checks.values()) else "fail"
    return Certificate(
        check="product_equivalence",
        verdict=verdict,
        hypothesis=hyp,
        claimed=claimed,
        observed=fusion,
        bounds_family="fusion_lift",
    )
