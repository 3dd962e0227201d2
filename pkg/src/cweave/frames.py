"""Frames and fusion frames of subspaces over a discretized measure space.

A vector frame assigns one vector per node; a fusion frame assigns one
(subspace, positive weight) pair per node.  The frame operator of a fusion
frame is the mass-weighted sum of scaled projectors

    S = sum_j  mass_j * v_j^2 * P_j

and the optimal frame bounds are its extreme eigenvalues.  Inner products
here are linear in the first argument: ``vec_inner(a, b) = b^H a``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .hilbert import (
    DEFAULT_RANK_TOL,
    InputError,
    MeasureSpace,
    Subspace,
    as_operator,
    extreme_eigs,
    projector,
    span_of,
)

DEFAULT_MEMBERSHIP_TOL = 1e-9


def vec_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Inner product on C^d, linear in the first argument."""
    return complex(np.vdot(b, a))


@dataclass(frozen=True, eq=False)
class FrameBounds:
    """Optimal lower/upper frame bounds; lower 0 means Bessel but not frame."""

    lower: float
    upper: float

    def __post_init__(self):
        object.__setattr__(self, "lower", float(self.lower))
        object.__setattr__(self, "upper", float(self.upper))
        if not (np.isfinite(self.lower) and np.isfinite(self.upper)):
            raise InputError("frame bounds must be finite")
        if self.lower < 0.0 or self.lower > self.upper:
            raise InputError(
                f"frame bounds need 0 <= lower <= upper, got ({self.lower}, {self.upper})"
            )

    def as_tuple(self) -> tuple[float, float]:
        return (self.lower, self.upper)


def bounds_of_operator(S, sym_tol: float = 1e-9) -> FrameBounds:
    """FrameBounds from a (numerically) PSD operator's extreme eigenvalues."""
    lo, hi = extreme_eigs(S, sym_tol)
    if lo < -1e-8 * max(1.0, abs(hi)):
        raise InputError(f"operator has a negative eigenvalue {lo:.3e}")
    return FrameBounds(max(lo, 0.0), max(hi, 0.0))


@dataclass(frozen=True, eq=False)
class CFrame:
    """One vector per node of a measure space."""

    space: MeasureSpace
    vectors: np.ndarray

    def __post_init__(self):
        V = as_operator(self.vectors, "frame vectors")
        if V.shape[0] != self.space.node_count:
            raise InputError(
                f"{V.shape[0]} vectors for {self.space.node_count} nodes"
            )
        if V.shape[1] < 1:
            raise InputError("frame vectors need a positive ambient dimension")
        V = V.copy()
        V.flags.writeable = False
        object.__setattr__(self, "vectors", V)

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])

    @property
    def node_count(self) -> int:
        return int(self.vectors.shape[0])


def cframe_operator(frame: CFrame) -> np.ndarray:
    """Frame operator sum_j mass_j |f_j><f_j|."""
    V = frame.vectors
    return (V.T * frame.space.weights) @ V.conj()


def cframe_bounds(frame: CFrame) -> FrameBounds:
    return bounds_of_operator(cframe_operator(frame))


@dataclass(frozen=True, eq=False)
class CFusionFrame:
    """One (subspace, positive weight) pair per node of a measure space."""

    space: MeasureSpace
    subspaces: tuple[Subspace, ...]
    weights: np.ndarray

    def __post_init__(self):
        subs = tuple(self.subspaces)
        if len(subs) != self.space.node_count:
            raise InputError(
                f"{len(subs)} subspaces for {self.space.node_count} nodes"
            )
        if not subs:
            raise InputError("fusion frame needs at least one node")
        d = subs[0].ambient_dim
        if any(V.ambient_dim != d for V in subs):
            raise InputError("all node subspaces must share the ambient dimension")
        v = np.asarray(self.weights, dtype=np.float64)
        if v.shape != (len(subs),):
            raise InputError("one weight per node is required")
        if not np.all(np.isfinite(v)) or not np.all(v > 0):
            raise InputError("fusion weights must be finite and strictly positive")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "subspaces", subs)
        object.__setattr__(self, "weights", v)

    @property
    def dim(self) -> int:
        return int(self.subspaces[0].ambient_dim)

    @property
    def node_count(self) -> int:
        return len(self.subspaces)

    def restrict(self, nodes: Sequence[int]) -> "CFusionFrame":
        from .hilbert import normalize_nodes

        idx = normalize_nodes(nodes, self.node_count)
        return CFusionFrame(
            self.space.restrict(idx),
            tuple(self.subspaces[i] for i in idx),
            self.weights[idx],
        )


def fusion_node_terms(F: CFusionFrame) -> np.ndarray:
    """Per-node operators mass_j * v_j^2 * P_j, stacked as (nodes, d, d)."""
    d = F.dim
    out = np.empty((F.node_count, d, d), dtype=np.complex128)
    coeff = F.space.weights * F.weights**2
    for j, V in enumerate(F.subspaces):
        out[j] = coeff[j] * projector(V)
    return out


def fusion_operator(F: CFusionFrame) -> np.ndarray:
    return fusion_node_terms(F).sum(axis=0)


def fusion_bounds(F: CFusionFrame) -> FrameBounds:
    return bounds_of_operator(fusion_operator(F))


@dataclass(frozen=True, eq=False)
class Field:
    """One vector per node; the square-integrable fields form the analysis range."""

    space: MeasureSpace
    values: np.ndarray

    def __post_init__(self):
        V = as_operator(self.values, "field values")
        if V.shape[0] != self.space.node_count:
            raise InputError(
                f"{V.shape[0]} field values for {self.space.node_count} nodes"
            )
        V = V.copy()
        V.flags.writeable = False
        object.__setattr__(self, "values", V)

    @property
    def dim(self) -> int:
        return int(self.values.shape[1])


def field_inner(f: Field, g: Field) -> complex:
    """Mass-weighted inner product of two fields, linear in the first."""
    if not f.space.same_nodes(g.space):
        raise InputError("fields live on different measure spaces")
    if f.dim != g.dim:
        raise InputError("fields have different vector dimensions")
    per_node = np.einsum("jk,jk->j", f.values, g.values.conj())
    return complex(np.dot(f.space.weights, per_node))


def field_norm(f: Field) -> float:
    return float(np.sqrt(max(field_inner(f, f).real, 0.0)))


def _check_membership(F: CFusionFrame, f: Field, tol: float) -> None:
    for j, V in enumerate(F.subspaces):
        fj = f.values[j]
        nrm = float(np.linalg.norm(fj))
        if nrm == 0.0:
            continue
        resid = float(np.linalg.norm(fj - V.basis @ (V.basis.conj().T @ fj)))
        if resid > tol * nrm:
            raise InputError(
                f"field value at node {j} lies outside the node subspace "
                f"(relative residual {resid / nrm:.3e})"
            )


def synthesis(
    F: CFusionFrame, f: Field, membership_tol: float = DEFAULT_MEMBERSHIP_TOL
) -> np.ndarray:
    """Reconstruct sum_j mass_j * v_j * f_j from a field in the node subspaces."""
    if not F.space.same_nodes(f.space):
        raise InputError("field and fusion frame live on different measure spaces")
    if f.dim != F.dim:
        raise InputError("field dimension does not match the frame dimension")
    _check_membership(F, f, membership_tol)
    coeff = F.space.weights * F.weights
    return coeff @ f.values


def analysis(F: CFusionFrame, h) -> Field:
    """Field of weighted projections j -> v_j * P_j h."""
    from .hilbert import as_vector

    x = as_vector(h)
    if x.size != F.dim:
        raise InputError("vector dimension does not match the frame dimension")
    vals = np.empty((F.node_count, F.dim), dtype=np.complex128)
    for j, V in enumerate(F.subspaces):
        vals[j] = F.weights[j] * (V.basis @ (V.basis.conj().T @ x))
    return Field(F.space, vals)


def frame_operator_apply(F: CFusionFrame, h) -> np.ndarray:
    """Synthesis after analysis, equal to the frame operator applied to h."""
    return synthesis(F, analysis(F, h))


def synthesis_matrix(F: CFusionFrame) -> np.ndarray:
    """Block-row matrix [sqrt(mass_j) * v_j * P_j]_j of shape (d, nodes*d).

    Its singular values squared are the frame operator's eigenvalues, so the
    operator norm is sqrt(upper frame bound); node subsets correspond to
    block columns, which is what the perturbation analysis restricts.
    """
    d = F.dim
    out = np.empty((d, F.node_count * d), dtype=np.complex128)
    coeff = np.sqrt(F.space.weights) * F.weights
    for j, V in enumerate(F.subspaces):
        out[:, j * d : (j + 1) * d] = coeff[j] * projector(V)
    return out


def cfusion_from_cframe(
    frame: CFrame, rank_tol: float = DEFAULT_RANK_TOL
) -> CFusionFrame:
    """Rank-one fusion frame with v_j = ||f_j|| and the line spanned by f_j.

    Preserves the frame operator exactly, hence also the optimal bounds.
    """
    norms = np.linalg.norm(frame.vectors, axis=1)
    if np.any(norms == 0.0):
        j = int(np.flatnonzero(norms == 0.0)[0])
        raise InputError(f"zero vector at node {j} cannot span a node subspace")
    subs = tuple(
        span_of([frame.vectors[j]], rank_tol) for j in range(frame.node_count)
    )
    return CFusionFrame(frame.space, subs, norms)
