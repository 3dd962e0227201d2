"""Finite-dimensional Hilbert space numerics over discretized measure spaces.

Vectors and operators are plain numpy arrays (complex128 throughout).  This
module supplies the three small value types everything downstream shares --
a measure space of weighted nodes, a partition of those nodes into blocks,
and a subspace held as an orthonormal basis -- plus the operator utilities:
orthogonal projectors, Moore-Penrose pseudo-inverses, majorization-style
factorization of one operator through another, extreme eigenvalues, subspace
images and intersections, and the smallest positive-semidefinite dominance
scale between two PSD operators.

All numerical rank decisions use a relative singular-value cutoff
(``DEFAULT_RANK_TOL`` times the largest singular value).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

DEFAULT_RANK_TOL = 1e-10
DEFAULT_SYM_TOL = 1e-9
DEFAULT_ENUM_BUDGET = 65536


class InputError(ValueError):
    """Invalid argument or malformed input document."""


class BudgetExceededError(RuntimeError):
    """Exhaustive enumeration would exceed the configured assignment budget."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def as_operator(M, name: str = "operator") -> np.ndarray:
    """Coerce to a 2-d complex matrix, rejecting anything else."""
    A = np.asarray(M, dtype=np.complex128)
    if A.ndim != 2:
        raise InputError(f"{name} must be a 2-d matrix, got ndim={A.ndim}")
    if not np.all(np.isfinite(A.real)) or not np.all(np.isfinite(A.imag)):
        raise InputError(f"{name} has non-finite entries")
    return A


def as_vector(v, name: str = "vector") -> np.ndarray:
    A = np.asarray(v, dtype=np.complex128)
    if A.ndim != 1:
        raise InputError(f"{name} must be 1-d, got ndim={A.ndim}")
    if not np.all(np.isfinite(A.real)) or not np.all(np.isfinite(A.imag)):
        raise InputError(f"{name} has non-finite entries")
    return A


@dataclass(frozen=True, eq=False)
class MeasureSpace:
    """Finite node set with one strictly positive mass per node."""

    weights: np.ndarray
    labels: tuple | None = None

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 1 or w.size == 0:
            raise InputError("measure space needs a nonempty 1-d array of node masses")
        if not np.all(np.isfinite(w)) or not np.all(w > 0):
            raise InputError("node masses must be finite and strictly positive")
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != w.size:
                raise InputError("label count must match node count")
            object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "weights", _frozen(w))

    @property
    def node_count(self) -> int:
        return int(self.weights.size)

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())

    def restrict(self, nodes: Sequence[int]) -> "MeasureSpace":
        """Sub-space on the given node indices (kept in the given order)."""
        idx = normalize_nodes(nodes, self.node_count)
        labels = None if self.labels is None else tuple(self.labels[i] for i in idx)
        return MeasureSpace(self.weights[idx], labels)

    def same_nodes(self, other: "MeasureSpace") -> bool:
        return self.node_count == other.node_count and bool(
            np.array_equal(self.weights, other.weights)
        )


def normalize_nodes(nodes: Sequence[int], node_count: int) -> np.ndarray:
    """Validate a node-index subset: ints in range, no duplicates, sorted."""
    idx = np.asarray(list(nodes), dtype=np.int64)
    if idx.ndim != 1 or idx.size == 0:
        raise InputError("node subset must be a nonempty index list")
    if np.any(idx < 0) or np.any(idx >= node_count):
        raise InputError(f"node index out of range [0, {node_count})")
    idx = np.unique(idx)
    return idx


def integrate(space: MeasureSpace, values) -> float:
    """Weighted sum of per-node values against the node masses."""
    v = np.asarray(values, dtype=np.float64)
    if v.shape != (space.node_count,):
        raise InputError(
            f"integrand has {v.shape} values for {space.node_count} nodes"
        )
    return float(np.dot(space.weights, v))


@dataclass(frozen=True, eq=False)
class Partition:
    """Assignment of every node to one of ``block_count`` blocks.

    Blocks may be empty; ``assignment[j]`` is the block index of node j.
    """

    block_count: int
    assignment: np.ndarray

    def __post_init__(self):
        if self.block_count < 1:
            raise InputError("a partition needs at least one block")
        a = np.asarray(self.assignment, dtype=np.int64)
        if a.ndim != 1 or a.size == 0:
            raise InputError("partition assignment must be a nonempty 1-d index array")
        if np.any(a < 0) or np.any(a >= self.block_count):
            raise InputError("block index out of range in partition assignment")
        object.__setattr__(self, "assignment", _frozen(a))

    @property
    def node_count(self) -> int:
        return int(self.assignment.size)

    def blocks(self) -> list[np.ndarray]:
        return [
            np.flatnonzero(self.assignment == b) for b in range(self.block_count)
        ]

    def as_list(self) -> list[int]:
        return [int(b) for b in self.assignment]


def partitions_exhaustive(
    node_count: int, block_count: int, budget: int = DEFAULT_ENUM_BUDGET
) -> Iterator[Partition]:
    """All node-to-block assignments in lexicographic order (node 0 varies slowest).

    Raises BudgetExceededError up front when block_count**node_count exceeds
    the budget; sampling or descent search are the fallbacks in that regime.
    """
    if node_count < 1 or block_count < 1:
        raise InputError("node and block counts must be positive")
    total = block_count**node_count
    if total > budget:
        raise BudgetExceededError(
            f"{block_count}^{node_count} = {total} assignments exceed the budget "
            f"of {budget}; raise the budget or use sampled/descent search"
        )
    for tup in itertools.product(range(block_count), repeat=node_count):
        yield Partition(block_count, np.array(tup, dtype=np.int64))


def random_partition(node_count: int, block_count: int, seed: int) -> Partition:
    """One uniformly random assignment, reproducible from the seed."""
    if node_count < 1 or block_count < 1:
        raise InputError("node and block counts must be positive")
    rng = np.random.default_rng(seed)
    return Partition(block_count, rng.integers(0, block_count, size=node_count))


def _orth(columns: np.ndarray, rank_tol: float) -> np.ndarray:
    """Orthonormal basis (as columns) for the column span of a matrix."""
    d = columns.shape[0]
    if columns.size == 0:
        return np.zeros((d, 0), dtype=np.complex128)
    U, s, _ = np.linalg.svd(columns, full_matrices=False)
    if s.size == 0 or s[0] <= 0.0:
        return np.zeros((d, 0), dtype=np.complex128)
    k = int(np.count_nonzero(s > rank_tol * s[0]))
    return U[:, :k]


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of C^d stored as a matrix with orthonormal columns."""

    basis: np.ndarray

    def __post_init__(self):
        B = as_operator(self.basis, "subspace basis")
        d, k = B.shape
        if k > d:
            raise InputError(f"basis has {k} columns in ambient dimension {d}")
        if k:
            gram = B.conj().T @ B
            if np.max(np.abs(gram - np.eye(k))) > 1e-8:
                raise InputError("subspace basis columns are not orthonormal")
        object.__setattr__(self, "basis", _frozen(B))

    @property
    def ambient_dim(self) -> int:
        return int(self.basis.shape[0])

    @property
    def dim(self) -> int:
        return int(self.basis.shape[1])

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(np.zeros((ambient_dim, 0), dtype=np.complex128))

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(np.eye(ambient_dim, dtype=np.complex128))


def span_of(
    vectors: Sequence,
    rank_tol: float = DEFAULT_RANK_TOL,
    ambient_dim: int | None = None,
) -> Subspace:
    """Subspace spanned by a list of vectors (SVD rank decision).

    An empty list yields the zero subspace, which needs an explicit
    ambient_dim since there is no vector to read it from.
    """
    vecs = [as_vector(v, "spanning vector") for v in vectors]
    if not vecs:
        if ambient_dim is None:
            raise InputError("empty spanning set needs an explicit ambient_dim")
        return Subspace.zero(ambient_dim)
    d = vecs[0].size
    if any(v.size != d for v in vecs):
        raise InputError("spanning vectors have mixed dimensions")
    if ambient_dim is not None and ambient_dim != d:
        raise InputError(
            f"spanning vectors live in dimension {d}, not ambient_dim={ambient_dim}"
        )
    return Subspace(_orth(np.stack(vecs, axis=1), rank_tol))


def projector(V: Subspace) -> np.ndarray:
    """Orthogonal projector onto the subspace, as a dense matrix."""
    B = V.basis
    return B @ B.conj().T


def operator_norm(M) -> float:
    """Largest singular value; zero for an empty matrix."""
    A = as_operator(M)
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))


def pseudo_inverse(M, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Moore-Penrose pseudo-inverse with the shared relative rank cutoff."""
    A = as_operator(M)
    if A.size == 0:
        return np.zeros((A.shape[1], A.shape[0]), dtype=np.complex128)
    return np.linalg.pinv(A, rcond=rank_tol)


def hermitian_part(M) -> np.ndarray:
    A = as_operator(M)
    return (A + A.conj().T) / 2.0


def extreme_eigs(S, sym_tol: float = DEFAULT_SYM_TOL) -> tuple[float, float]:
    """(smallest, largest) eigenvalue of a Hermitian matrix.

    Refuses matrices whose anti-Hermitian part exceeds sym_tol relative to
    the matrix norm; below that gate the matrix is symmetrized first.
    """
    A = as_operator(S, "matrix")
    if A.shape[0] != A.shape[1]:
        raise InputError("extreme eigenvalues need a square matrix")
    scale = operator_norm(A)
    asym = operator_norm(A - A.conj().T)
    if asym > sym_tol * scale:
        raise InputError(
            f"matrix is not Hermitian: anti-Hermitian norm {asym:.3e} exceeds "
            f"{sym_tol:.1e} * norm {scale:.3e}"
        )
    w = np.linalg.eigvalsh(hermitian_part(A))
    return float(w[0]), float(w[-1])


@dataclass(frozen=True, eq=False)
class Factorization:
    """Outcome of factoring L1 through L2 as L1 = L2 @ factor.

    Infeasibility (range(L1) not inside range(L2)) is reported as a value:
    ``feasible`` False with the residual norm, factor and scale None.  When
    feasible, ``scale`` is ||factor||^2, the least alpha with
    L1 L1* <= alpha L2 L2* in the semidefinite order.
    """

    feasible: bool
    factor: np.ndarray | None
    scale: float | None
    residual: float


def factor_through(
    L1,
    L2,
    rank_tol: float = DEFAULT_RANK_TOL,
    residual_tol: float = 1e-9,
) -> Factorization:
    """Least-norm solution of L2 @ X = L1, with a feasibility verdict."""
    A1 = as_operator(L1, "L1")
    A2 = as_operator(L2, "L2")
    if A1.shape[0] != A2.shape[0]:
        raise InputError(
            f"L1 and L2 must share their output dimension, got {A1.shape[0]} and {A2.shape[0]}"
        )
    X = pseudo_inverse(A2, rank_tol) @ A1
    residual = operator_norm(A2 @ X - A1)
    if residual > residual_tol * (1.0 + operator_norm(A1)):
        return Factorization(False, None, None, residual)
    return Factorization(True, X, operator_norm(X) ** 2, residual)


def image_subspace(M, V: Subspace, rank_tol: float = DEFAULT_RANK_TOL) -> Subspace:
    """Image of a subspace under an operator, i.e. span of M applied to a basis."""
    A = as_operator(M)
    if A.shape[1] != V.ambient_dim:
        raise InputError(
            f"operator expects dimension {A.shape[1]}, subspace lives in {V.ambient_dim}"
        )
    return Subspace(_orth(A @ V.basis, rank_tol))


def range_subspace(M, rank_tol: float = DEFAULT_RANK_TOL) -> Subspace:
    """Column span of an operator."""
    return Subspace(_orth(as_operator(M), rank_tol))


def intersect_subspaces(V: Subspace, W: Subspace, tol: float = 1e-8) -> Subspace:
    """Intersection via the eigenspace of P_V P_W P_V at eigenvalue one.

    Eigenvectors with eigenvalue >= 1 - tol are kept; they lie in both
    subspaces up to sqrt(tol)-level accuracy, which is what the downstream
    projector comparisons tolerate.
    """
    if V.ambient_dim != W.ambient_dim:
        raise InputError("subspace intersection needs a shared ambient dimension")
    if V.dim == 0 or W.dim == 0:
        return Subspace.zero(V.ambient_dim)
    M = hermitian_part(projector(V) @ projector(W) @ projector(V))
    w, Q = np.linalg.eigh(M)
    keep = w >= 1.0 - tol
    return Subspace(Q[:, keep])


def min_dominance_scale(
    M,
    C,
    rank_tol: float = DEFAULT_RANK_TOL,
    feas_tol: float = 1e-9,
) -> float:
    """Smallest alpha with M <= alpha * C in the semidefinite order.

    Both arguments must be PSD.  Returns inf when no finite alpha works,
    i.e. when range(M) leaks outside range(C).  On the range of C the
    answer is the largest eigenvalue of C^{-1/2} M C^{-1/2}.
    """
    A = hermitian_part(M)
    B = hermitian_part(C)
    if A.shape != B.shape:
        raise InputError("dominance scale needs same-shaped matrices")
    mscale = operator_norm(A)
    if mscale == 0.0:
        return 0.0
    wC, QC = np.linalg.eigh(B)
    top = max(float(wC[-1]), 0.0)
    if top == 0.0:
        return float("inf")
    pos = wC > rank_tol * top
    Qp = QC[:, pos]
    off_range = operator_norm(A - Qp @ (Qp.conj().T @ A))
    if off_range > feas_tol * mscale:
        return float("inf")
    inv_sqrt = 1.0 / np.sqrt(wC[pos])
    core = (Qp * inv_sqrt).conj().T @ A @ (Qp * inv_sqrt)
    hi = float(np.linalg.eigvalsh(hermitian_part(core))[-1])
    return max(hi, 0.0)
