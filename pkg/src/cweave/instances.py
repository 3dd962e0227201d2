"""Reference instances: worked examples and seeded random families.

The axis-aligned Parseval pair has closed-form universal weaving bounds
(2 eps^2 / (1 + eps^2), 2 / (1 + eps^2)), which makes it the anchor test
for the enumeration engine.  The time-frequency shift system over Z_d is
tight for the full shift lattice with bound d * ||window||^2.  The random
fusion-family generator draws rotation-invariant subspaces and rejects
members that are not frames.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hilbert import InputError, MeasureSpace, Subspace, span_of
from .frames import CFrame, CFusionFrame, fusion_bounds
from .weaving import WovenFamily


def parseval_weaving_pair(
    epsilon: float, weights=None
) -> tuple[CFrame, CFrame]:
    """Two axis-aligned Parseval frames on four nodes that weave.

    Both frames scale the two coordinate axes by delta = (1+eps^2)^(-1/2)
    and delta*eps; the second frame swaps which node gets which scale.
    Universal weaving bounds are (2 eps^2/(1+eps^2), 2/(1+eps^2)).
    """
    eps = float(epsilon)
    if not np.isfinite(eps) or eps <= 0:
        raise InputError("epsilon must be a positive real number")
    delta = 1.0 / np.sqrt(1.0 + eps * eps)
    e1 = np.array([1.0, 0.0])
    e2 = np.array([0.0, 1.0])
    first = np.stack([delta * e1, delta * eps * e1, delta * e2, delta * eps * e2])
    second = np.stack([delta * eps * e1, delta * e1, delta * eps * e2, delta * e2])
    w = np.ones(4) if weights is None else np.asarray(weights, dtype=np.float64)
    space = MeasureSpace(w)
    return CFrame(space, first), CFrame(space, second)


def parseval_pair_universal(epsilon: float) -> tuple[float, float]:
    """Closed-form universal weaving bounds of the Parseval pair.

    Every weaving operator is diagonal with entries drawn from
    {1, 2/(1+eps^2), 2 eps^2/(1+eps^2)}, so the extremes are the smaller
    and larger of the last two.
    """
    eps = float(epsilon)
    a = 2.0 * eps * eps / (1.0 + eps * eps)
    b = 2.0 / (1.0 + eps * eps)
    return min(a, b), max(a, b)


@dataclass(frozen=True, eq=False)
class ShiftSystemParams:
    """Time-frequency shift system over Z_d.

    ``lattice`` lists (modulation, translation) pairs; None means the full
    d*d lattice.  ``scale`` multiplies the window of the second frame and
    must satisfy |scale|^2 > 1 so the pair is ordered.
    """

    dimension: int
    window: np.ndarray
    lattice: tuple[tuple[int, int], ...] | None = None
    scale: complex = 1.5 + 0j

    def __post_init__(self):
        if self.dimension < 1:
            raise InputError("dimension must be positive")
        g = np.asarray(self.window, dtype=np.complex128)
        if g.shape != (self.dimension,):
            raise InputError("window must be a vector of the stated dimension")
        if float(np.linalg.norm(g)) == 0.0:
            raise InputError("window must be nonzero")
        g = g.copy()
        g.flags.writeable = False
        object.__setattr__(self, "window", g)
        object.__setattr__(self, "scale", complex(self.scale))
        if abs(self.scale) ** 2 <= 1.0:
            raise InputError("|scale|^2 must exceed 1")
        if self.lattice is not None:
            pts = tuple((int(a) % self.dimension, int(b) % self.dimension)
                        for a, b in self.lattice)
            if not pts:
                raise InputError("lattice must be nonempty when given")
            if len(set(pts)) != len(pts):
                raise InputError("lattice points must be distinct")
            object.__setattr__(self, "lattice", pts)


def _shift_vector(g: np.ndarray, a: int, b: int) -> np.ndarray:
    d = g.size
    t = np.arange(d)
    phase = np.exp(2j * np.pi * a * t / d)
    return phase * np.roll(g, b)


def shift_system(params: ShiftSystemParams) -> tuple[CFrame, CFrame]:
    """The shift system of the window and of its scaled copy.

    Full-lattice systems are tight with frame bound d * ||window||^2; the
    scaled copy's bounds are |scale|^2 times the window's.
    """
    d = params.dimension
    lattice = params.lattice
    if lattice is None:
        lattice = tuple((a, b) for a in range(d) for b in range(d))
    vecs = np.stack([_shift_vector(params.window, a, b) for a, b in lattice])
    space = MeasureSpace(np.ones(len(lattice)))
    return (
        CFrame(space, vecs),
        CFrame(space, np.complex128(params.scale) * vecs),
    )


def random_fusion_family(
    dimension: int,
    node_count: int,
    member_count: int,
    dim_range: tuple[int, int] | None = None,
    weight_range: tuple[float, float] = (0.5, 1.5),
    seed: int = 0,
    measure_weights=None,
    min_lower: float = 1e-6,
    max_tries: int = 200,
) -> WovenFamily:
    """Seeded random family whose members are all fusion frames.

    Subspace dimensions are uniform over dim_range (default (1, dimension)),
    bases come from the SVD of complex Gaussian matrices (rotation
    invariant), and weights are uniform over weight_range.  Members whose
    frame operator has smallest eigenvalue below ``min_lower`` are redrawn;
    ranges that cannot produce a frame raise an input error.
    """
    if dimension < 1 or node_count < 1 or member_count < 2:
        raise InputError(
            "need dimension >= 1, node_count >= 1 and member_count >= 2"
        )
    lo_d, hi_d = dim_range if dim_range is not None else (1, dimension)
    if not (1 <= lo_d <= hi_d <= dimension):
        raise InputError("dim_range must satisfy 1 <= low <= high <= dimension")
    w_lo, w_hi = float(weight_range[0]), float(weight_range[1])
    if not (0 < w_lo <= w_hi):
        raise InputError("weight_range must be positive and ordered")
    if node_count * hi_d < dimension:
        raise InputError(
            "node subspaces cannot cover the space: node_count * max_dim < dimension"
        )
    space = MeasureSpace(
        np.ones(node_count)
        if measure_weights is None
        else np.asarray(measure_weights, dtype=np.float64)
    )
    if space.node_count != node_count:
        raise InputError("measure_weights length must equal node_count")
    rng = np.random.default_rng(seed)
    members = []
    for _ in range(member_count):
        member = None
        for _attempt in range(max_tries):
            subs = []
            for _j in range(node_count):
                k = int(rng.integers(lo_d, hi_d + 1))
                G = rng.standard_normal((dimension, k)) + 1j * rng.standard_normal(
                    (dimension, k)
                )
                subs.append(span_of(list(G.T)))
            v = rng.uniform(w_lo, w_hi, size=node_count)
            candidate = CFusionFrame(space, tuple(subs), v)
            if fusion_bounds(candidate).lower >= min_lower:
                member = candidate
                break
        if member is None:
            raise InputError(
                "could not draw a fusion frame within the given ranges"
            )
        members.append(member)
    return WovenFamily(tuple(members))
