"""Shared test utilities: independent oracles and instance builders.

The oracles deliberately avoid the code paths they check: universal bounds
are recomputed with a plain itertools loop, and the semidefinite dominance
scale is recomputed by bisection on eigenvalue feasibility.
"""

from __future__ import annotations

import itertools

import numpy as np

from cweave import (
    CFusionFrame,
    MeasureSpace,
    Subspace,
    WovenFamily,
    fusion_bounds,
    span_of,
)


def brute_universal(family: WovenFamily) -> tuple[float, float]:
    """Ground-truth universal bounds by a direct loop over all partitions."""
    m = family.member_count
    n = family.node_count
    terms = family.node_terms()
    lo = np.inf
    hi = -np.inf
    for assign in itertools.product(range(m), repeat=n):
        S = sum(terms[b, j] for j, b in enumerate(assign))
        w = np.linalg.eigvalsh(S)
        lo = min(lo, w[0])
        hi = max(hi, w[-1])
    return max(float(lo), 0.0), max(float(hi), 0.0)


def psd_scale_bisection(M, C, hi_cap: float = 1e9, iters: int = 200) -> float:
    """Least alpha with M <= alpha * C, via bisection on feasibility."""
    M = np.asarray(M, dtype=np.complex128)
    C = np.asarray(C, dtype=np.complex128)
    scale = max(float(np.linalg.norm(M, 2)), 1.0)

    def feasible(alpha: float) -> bool:
        H = alpha * C - M
        w = np.linalg.eigvalsh((H + H.conj().T) / 2.0)
        return bool(w[0] >= -1e-12 * scale * max(alpha, 1.0))

    if not feasible(hi_cap):
        return float("inf")
    lo, hi = 0.0, hi_cap
    if feasible(0.0):
        return 0.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return hi


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    Q, R = np.linalg.qr(G)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_invertible(
    rng: np.random.Generator, d: int, sv_range: tuple[float, float] = (0.5, 2.0)
) -> np.ndarray:
    s = rng.uniform(sv_range[0], sv_range[1], size=d)
    return random_unitary(rng, d) @ np.diag(s).astype(np.complex128) @ random_unitary(rng, d)


def random_subspace(rng: np.random.Generator, d: int, k: int) -> Subspace:
    if k == 0:
        return Subspace.zero(d)
    G = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    return span_of(list(G.T))


def perturbed_family(
    rng: np.random.Generator,
    dimension: int,
    node_count: int,
    member_count: int,
    noise: float,
    dim_range: tuple[int, int] | None = None,
) -> WovenFamily:
    """A base fusion frame plus members that are small perturbations of it.

    Each non-base member nudges every node basis by a Gaussian of size
    ``noise`` (re-orthonormalized) and scales the weights by 1 + O(noise).
    """
    lo_d, hi_d = dim_range if dim_range is not None else (1, dimension)
    space = MeasureSpace(np.ones(node_count))
    while True:
        dims = rng.integers(lo_d, hi_d + 1, size=node_count)
        bases = []
        for k in dims:
            G = rng.standard_normal((dimension, int(k))) + 1j * rng.standard_normal(
                (dimension, int(k))
            )
            bases.append(np.linalg.qr(G)[0])
        v0 = rng.uniform(0.8, 1.2, size=node_count)
        base = CFusionFrame(space, tuple(Subspace(B) for B in bases), v0)
        if fusion_bounds(base).lower > 1e-3:
            break
    members = [base]
    for _ in range(member_count - 1):
        subs = []
        for B in bases:
            G = rng.standard_normal(B.shape) + 1j * rng.standard_normal(B.shape)
            subs.append(Subspace(np.linalg.qr(B + noise * G)[0]))
        v = v0 * (1.0 + noise * rng.uniform(-1.0, 1.0, size=node_count))
        members.append(CFusionFrame(space, tuple(subs), v))
    return WovenFamily(tuple(members))


def axis_fusion_member(
    space: MeasureSpace, axis_sets: list[list[int]], weights, dimension: int
) -> CFusionFrame:
    """Member whose node subspaces are spans of standard basis vectors."""
    eye = np.eye(dimension, dtype=np.complex128)
    subs = tuple(
        span_of([eye[:, a] for a in axes], ambient_dim=dimension)
        for axes in axis_sets
    )
    return CFusionFrame(space, subs, np.asarray(weights, dtype=np.float64))
