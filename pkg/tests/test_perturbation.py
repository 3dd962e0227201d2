import numpy as np
import pytest

from cweave import (
    CFusionFrame,
    ChainScalars,
    InputError,
    MeasureSpace,
    ReferenceScalars,
    WovenFamily,
    certify_perturbation,
    certify_perturbation_chain,
    chain_lower_bound,
    default_chain_scalars,
    default_scalars,
    family_from_cframes,
    fusion_bounds,
    parseval_weaving_pair,
    perturbation_lower_bound,
    synthesis_distance,
    universal_bounds,
)
from helpers import perturbed_family, random_subspace


def identical_pair(eps: float = 0.5) -> WovenFamily:
    phi, _ = parseval_weaving_pair(eps)
    return family_from_cframes([phi, phi])


def scaled_member_family(t: float, seed: int = 1) -> WovenFamily:
    rng = np.random.default_rng(seed)
    d, n = 3, 4
    space = MeasureSpace(rng.uniform(0.5, 1.5, size=n))
    subs = [random_subspace(rng, d, int(rng.integers(1, d + 1))) for _ in range(n)]
    w = rng.uniform(0.5, 1.5, size=n)
    return WovenFamily(
        (CFusionFrame(space, subs, w), CFusionFrame(space, subs, t * w))
    )


def test_distance_zero_on_identical_members():
    assert synthesis_distance(identical_pair(), 0, 1) == 0.0


def test_distance_symmetry():
    fam = perturbed_family(np.random.default_rng(2), 3, 4, 2, noise=0.1)
    assert abs(synthesis_distance(fam, 0, 1) - synthesis_distance(fam, 1, 0)) < 1e-14


def test_distance_triangle_inequality():
    rng = np.random.default_rng(3)
    for _ in range(5):
        fam = perturbed_family(rng, 3, 4, 3, noise=0.2)
        d01 = synthesis_distance(fam, 0, 1)
        d12 = synthesis_distance(fam, 1, 2)
        d02 = synthesis_distance(fam, 0, 2)
        assert d02 <= d01 + d12 + 1e-12


def test_distance_of_scaled_member():
    t = 0.8
    fam = scaled_member_family(t)
    expected = (1 - t) * np.sqrt(fusion_bounds(fam.members[0]).upper)
    assert abs(synthesis_distance(fam, 0, 1) - expected) < 1e-10


def test_distance_index_guard():
    with pytest.raises(InputError):
        synthesis_distance(identical_pair(), 0, 2)


def test_scalar_validation():
    with pytest.raises(InputError):
        ReferenceScalars(0, [0.0, -0.1], [0.0, 0.0], [0.0, 0.0])
    with pytest.raises(InputError):
        ReferenceScalars(2, [0.0, 0.1], [0.0, 0.0], [0.0, 0.0])
    with pytest.raises(InputError):
        ChainScalars([], [], [])
    with pytest.raises(InputError):
        ChainScalars([0.1], [0.1, 0.2], [0.0])


def test_lower_bound_hand_formula():
    # identical Parseval members: A_ref = B_i = 1, so the deduction is
    # (lam + eta + gamma) * 2 for the single non-reference member
    fam = identical_pair()
    s = ReferenceScalars(0, [0.0, 0.1], [0.0, 0.0], [0.0, 0.0])
    assert abs(perturbation_lower_bound(fam, s) - 0.8) < 1e-12
    s2 = ReferenceScalars(0, [0.0, 0.0], [0.0, 0.05], [0.0, 0.05])
    assert abs(perturbation_lower_bound(fam, s2) - 0.8) < 1e-12


def test_certify_hand_formula_passes():
    fam = identical_pair()
    cert = certify_perturbation(fam, ReferenceScalars(0, [0.0, 0.1], [0.0] * 2, [0.0] * 2))
    assert cert.verdict == "pass"
    assert abs(cert.claimed.lower - 0.8) < 1e-12
    assert abs(cert.claimed.upper - 2.0) < 1e-12
    assert abs(cert.observed.lower - 1.0) < 1e-12
    assert cert.hypothesis["hypothesis_margins"]["1"] == pytest.approx(0.1)


def test_certify_default_scalars_on_perturbed_family():
    rng = np.random.default_rng(11)
    hits = 0
    for _ in range(6):
        fam = perturbed_family(rng, 3, 4, 2, noise=0.02)
        cert = certify_perturbation(fam)
        assert cert.verdict in ("pass", "inapplicable")
        if cert.verdict == "pass":
            hits += 1
            assert cert.claimed.lower <= cert.observed.lower + 1e-8
            # margins of the exact-distance instantiation vanish
            for margin in cert.hypothesis["hypothesis_margins"].values():
                assert abs(margin) < 1e-9
    assert hits >= 3  # small noise keeps the formula positive most of the time


def test_certify_gates_on_nonpositive_formula():
    fam = family_from_cframes(parseval_weaving_pair(0.5))
    cert = certify_perturbation(fam)  # the two members are far apart
    assert cert.verdict == "inapplicable"
    assert "nonpositive" in cert.notes


def test_certify_gates_on_violated_hypothesis():
    fam = family_from_cframes(parseval_weaving_pair(0.5))
    tight = ReferenceScalars(0, [0.0, 0.0], [0.0, 0.0], [0.0, 0.0])
    cert = certify_perturbation(fam, tight)
    assert cert.verdict == "inapplicable"
    assert "exceeds" in cert.notes
    assert cert.hypothesis["hypothesis_margins"]["1"] < 0


def test_certify_scalar_length_guard():
    fam = identical_pair()
    with pytest.raises(InputError):
        certify_perturbation(fam, ReferenceScalars(0, [0.0] * 3, [0.0] * 3, [0.0] * 3))


def test_chain_lower_bound_hand_formula():
    phi, _ = parseval_weaving_pair(0.5)
    fam = family_from_cframes([phi, phi, phi])
    s = ChainScalars([0.1, 0.05], [0.0, 0.0], [0.0, 0.0])
    assert abs(chain_lower_bound(fam, s) - 0.7) < 1e-12
    cert = certify_perturbation_chain(fam, s)
    assert cert.verdict == "pass"
    assert abs(cert.claimed.lower - 0.7) < 1e-12
    assert abs(cert.claimed.upper - 3.0) < 1e-12
    assert abs(cert.observed.lower - 1.0) < 1e-12


def test_chain_default_scalars_on_perturbed_family():
    rng = np.random.default_rng(13)
    hits = 0
    for _ in range(6):
        fam = perturbed_family(rng, 3, 4, 3, noise=0.01)
        cert = certify_perturbation_chain(fam)
        assert cert.verdict in ("pass", "inapplicable")
        if cert.verdict == "pass":
            hits += 1
            assert cert.claimed.lower <= cert.observed.lower + 1e-8
    assert hits >= 3


def test_chain_anchors_at_first_member():
    # reordering members changes the anchor, so the formula changes with it
    phi, psi = parseval_weaving_pair(0.5)
    fam = family_from_cframes([phi, phi])
    s = ChainScalars([0.2], [0.0], [0.0])
    base = chain_lower_bound(fam, s)
    assert abs(base - (1.0 - 0.2 * 2.0)) < 1e-12


def test_default_scalar_constructors():
    rng = np.random.default_rng(14)
    fam = perturbed_family(rng, 3, 4, 3, noise=0.05)
    s = default_scalars(fam, reference=1)
    assert s.reference == 1
    assert s.lam[1] == 0.0
    assert abs(s.lam[0] - synthesis_distance(fam, 1, 0)) < 1e-14
    c = default_chain_scalars(fam)
    assert c.pair_count == 2
    assert abs(c.lam[1] - synthesis_distance(fam, 1, 2)) < 1e-14


def test_perturbation_certificate_is_sound_when_it_passes():
    # whenever the certifier passes, the claimed lower really brackets the
    # enumerated universal lower bound
    rng = np.random.default_rng(15)
    for _ in range(10):
        noise = float(rng.uniform(0.0, 0.2))
        fam = perturbed_family(rng, 2, 3, 2, noise=noise)
        cert = certify_perturbation(fam)
        if cert.verdict == "pass":
            exact = universal_bounds(fam)
            assert cert.claimed.lower <= exact.lower + 1e-8
            assert cert.claimed.upper >= exact.upper - 1e-8
