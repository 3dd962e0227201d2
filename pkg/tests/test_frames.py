import numpy as np
import pytest

from cweave import (
    CFrame,
    CFusionFrame,
    Field,
    FrameBounds,
    InputError,
    MeasureSpace,
    analysis,
    bounds_of_operator,
    cframe_bounds,
    cframe_operator,
    cfusion_from_cframe,
    field_inner,
    field_norm,
    frame_operator_apply,
    fusion_bounds,
    fusion_node_terms,
    fusion_operator,
    parseval_weaving_pair,
    span_of,
    synthesis,
    synthesis_matrix,
    vec_inner,
)


def test_vec_inner_is_linear_in_first_argument():
    a = np.array([1.0 + 2.0j, 0.0])
    b = np.array([0.0 + 1.0j, 3.0])
    assert vec_inner(a, b) == np.conj(0.0 + 1.0j) * (1.0 + 2.0j)
    assert vec_inner(2j * a, b) == 2j * vec_inner(a, b)
    assert vec_inner(a, 2j * b) == np.conj(2j) * vec_inner(a, b)


def test_frame_bounds_validation():
    fb = FrameBounds(np.float64(0.5), np.float64(2.0))
    assert type(fb.lower) is float and type(fb.upper) is float
    with pytest.raises(InputError):
        FrameBounds(2.0, 1.0)
    with pytest.raises(InputError):
        FrameBounds(-0.1, 1.0)
    with pytest.raises(InputError):
        FrameBounds(0.0, float("inf"))


def test_cframe_bounds_hand_example():
    # {e1, e1, e2} with unit masses: S = diag(2, 1)
    space = MeasureSpace([1.0, 1.0, 1.0])
    vecs = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    frame = CFrame(space, vecs)
    S = cframe_operator(frame)
    np.testing.assert_allclose(S, np.diag([2.0, 1.0]), atol=1e-14)
    b = cframe_bounds(frame)
    assert abs(b.lower - 1.0) < 1e-12 and abs(b.upper - 2.0) < 1e-12


def test_cframe_masses_scale_operator():
    space = MeasureSpace([0.5, 2.0])
    vecs = np.array([[1.0, 0.0], [0.0, 1.0]])
    S = cframe_operator(CFrame(space, vecs))
    np.testing.assert_allclose(S, np.diag([0.5, 2.0]), atol=1e-14)


def test_parseval_pair_members_are_parseval():
    for eps in (0.1, 0.5, 1.0, 2.0):
        phi, psi = parseval_weaving_pair(eps)
        for frame in (phi, psi):
            b = cframe_bounds(frame)
            assert abs(b.lower - 1.0) < 1e-12
            assert abs(b.upper - 1.0) < 1e-12


def test_fusion_operator_quadrature_oracle():
    # direct quadrature of w(x) v(x)^2 P(x) h against the assembled operator
    rng = np.random.default_rng(21)
    d, n = 5, 12
    space = MeasureSpace(rng.uniform(0.2, 2.0, size=n))
    subs, weights = [], []
    for _ in range(n):
        k = int(rng.integers(1, d + 1))
        G = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
        subs.append(span_of(list(G.T)))
        weights.append(float(rng.uniform(0.3, 1.8)))
    ff = CFusionFrame(space, subs, np.array(weights))
    S = fusion_operator(ff)
    h = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    acc = np.zeros(d, dtype=complex)
    for j in range(n):
        P = subs[j].basis @ subs[j].basis.conj().T
        acc += space.weights[j] * weights[j] ** 2 * (P @ h)
    np.testing.assert_allclose(S @ h, acc, atol=1e-10)
    terms = fusion_node_terms(ff)
    np.testing.assert_allclose(terms.sum(axis=0), S, atol=1e-12)
    b = fusion_bounds(ff)
    lo, hi = np.linalg.eigvalsh(S)[[0, -1]]
    assert abs(b.lower - max(lo, 0.0)) < 1e-10 and abs(b.upper - hi) < 1e-10


def test_analysis_synthesis_adjoint():
    # <T* h, f> over the field measure equals <h, T f> in the ambient space
    rng = np.random.default_rng(22)
    for _ in range(20):
        d = int(rng.integers(2, 6))
        n = int(rng.integers(2, 7))
        space = MeasureSpace(rng.uniform(0.2, 2.0, size=n))
        subs = []
        for _ in range(n):
            k = int(rng.integers(1, d + 1))
            G = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
            subs.append(span_of(list(G.T)))
        ff = CFusionFrame(space, subs, rng.uniform(0.3, 1.8, size=n))
        h = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        raw = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
        proj = np.array([(s.basis @ (s.basis.conj().T @ raw[j])) for j, s in enumerate(subs)])
        f = Field(space, proj)
        lhs = field_inner(analysis(ff, h), f)
        rhs = vec_inner(h, synthesis(ff, f))
        assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(rhs))


def test_frame_operator_apply_matches_matrix():
    rng = np.random.default_rng(23)
    phi, _ = parseval_weaving_pair(0.7)
    ff = cfusion_from_cframe(phi)
    h = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    np.testing.assert_allclose(
        frame_operator_apply(ff, h), fusion_operator(ff) @ h, atol=1e-12
    )


def test_field_norm_consistency():
    phi, _ = parseval_weaving_pair(0.5)
    ff = cfusion_from_cframe(phi)
    coeffs = analysis(ff, np.array([1.0, 2.0j]))
    assert abs(field_norm(coeffs) ** 2 - field_inner(coeffs, coeffs).real) < 1e-12


def test_synthesis_matrix_reconstructs_operator():
    rng = np.random.default_rng(24)
    for _ in range(15):
        d = int(rng.integers(2, 6))
        n = int(rng.integers(2, 7))
        space = MeasureSpace(rng.uniform(0.2, 2.0, size=n))
        subs = []
        for _ in range(n):
            k = int(rng.integers(1, d + 1))
            G = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
            subs.append(span_of(list(G.T)))
        ff = CFusionFrame(space, subs, rng.uniform(0.3, 1.8, size=n))
        T = synthesis_matrix(ff)
        np.testing.assert_allclose(T @ T.conj().T, fusion_operator(ff), atol=1e-10)
        smax = np.linalg.svd(T, compute_uv=False)[0]
        assert abs(smax**2 - fusion_bounds(ff).upper) < 1e-8


def test_membership_enforced_by_synthesis():
    phi, _ = parseval_weaving_pair(0.5)
    ff = cfusion_from_cframe(phi)
    bad = np.ones((ff.space.node_count, 2), dtype=complex)
    with pytest.raises(InputError):
        synthesis(ff, Field(ff.space, bad))


def test_field_space_mismatch():
    phi, _ = parseval_weaving_pair(0.5)
    ff = cfusion_from_cframe(phi)
    coeffs = analysis(ff, np.array([1.0, 0.0]))
    other = Field(MeasureSpace([1.0, 1.0, 1.0]), np.zeros((3, 2)))
    with pytest.raises(InputError):
        field_inner(coeffs, other)
    skewed = Field(MeasureSpace([2.0, 1.0, 1.0, 1.0]), np.zeros((4, 2)))
    with pytest.raises(InputError):
        field_inner(coeffs, skewed)


def test_cfusion_from_cframe_preserves_operator():
    rng = np.random.default_rng(25)
    for _ in range(15):
        d = int(rng.integers(2, 5))
        n = int(rng.integers(2, 8))
        space = MeasureSpace(rng.uniform(0.2, 2.0, size=n))
        vecs = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
        frame = CFrame(space, vecs)
        ff = cfusion_from_cframe(frame)
        np.testing.assert_allclose(
            fusion_operator(ff), cframe_operator(frame), atol=1e-10
        )


def test_cfusion_from_cframe_rejects_zero_vector():
    space = MeasureSpace([1.0, 1.0])
    vecs = np.array([[1.0, 0.0], [0.0, 0.0]])
    with pytest.raises(InputError, match="1"):
        cfusion_from_cframe(CFrame(space, vecs))


def test_fusion_frame_validation():
    space = MeasureSpace([1.0, 1.0])
    subs = [span_of([np.array([1.0, 0.0])]), span_of([np.array([0.0, 1.0])])]
    with pytest.raises(InputError):
        CFusionFrame(space, subs, np.array([1.0, -1.0]))
    with pytest.raises(InputError):
        CFusionFrame(space, subs, np.array([1.0]))
    wrong_dim = [span_of([np.array([1.0, 0.0, 0.0])]), subs[1]]
    with pytest.raises(InputError):
        CFusionFrame(space, wrong_dim, np.array([1.0, 1.0]))


def test_bounds_of_operator_rejects_indefinite():
    with pytest.raises(InputError):
        bounds_of_operator(np.diag([-1.0, 1.0]))


def test_fusion_restrict():
    rng = np.random.default_rng(26)
    space = MeasureSpace([1.0, 2.0, 3.0])
    subs = [span_of([rng.standard_normal(3)]) for _ in range(3)]
    ff = CFusionFrame(space, subs, np.array([1.0, 1.5, 2.0]))
    sub = ff.restrict([0, 2])
    terms = fusion_node_terms(ff)
    np.testing.assert_allclose(
        fusion_operator(sub), terms[0] + terms[2], atol=1e-12
    )
