import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cweave import (
    CFrame,
    InputError,
    MeasureSpace,
    WovenFamily,
    cframe_operator,
    family_from_cframes,
    parseval_weaving_pair,
    random_fusion_family,
)
from cweave.serialize import (
    cframe_to_doc,
    decode_complex,
    decode_matrix,
    decode_vector,
    dump_json,
    encode_complex,
    encode_matrix,
    encode_vector,
    fusion_from_doc,
    fusion_to_doc,
    instance_from_doc,
    instance_to_doc,
    load_json,
    space_from_doc,
    space_to_doc,
)
from cweave.weaving import lift_product

finite = st.floats(
    allow_nan=False, allow_infinity=False, min_value=-1e12, max_value=1e12
)


@given(finite, finite)
@settings(max_examples=200, deadline=None)
def test_complex_round_trip_exact(re, im):
    z = complex(re, im)
    assert decode_complex(encode_complex(z)) == z


def test_complex_decode_accepts_plain_numbers():
    assert decode_complex(1.5) == 1.5 + 0j
    assert decode_complex(2) == 2 + 0j
    assert decode_complex("3+4j") == 3 + 4j
    assert decode_complex(" 3 + 4j ") == 3 + 4j


def test_complex_decode_rejects_garbage():
    with pytest.raises(InputError, match="value"):
        decode_complex("fish")
    with pytest.raises(InputError):
        decode_complex(True)
    with pytest.raises(InputError):
        decode_complex(None, where="spot")


def test_vector_and_matrix_round_trip():
    rng = np.random.default_rng(1)
    v = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    np.testing.assert_array_equal(decode_vector(encode_vector(v)), v)
    M = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
    np.testing.assert_array_equal(decode_matrix(encode_matrix(M)), M)


def test_matrix_decode_rejects_ragged_and_empty():
    with pytest.raises(InputError, match="mixed"):
        decode_matrix([["1", "2"], ["3"]])
    with pytest.raises(InputError):
        decode_matrix([])
    with pytest.raises(InputError):
        decode_vector([])


def test_space_round_trip():
    space = MeasureSpace([0.5, 1.5, 2.0])
    again = space_from_doc(space_to_doc(space))
    np.testing.assert_array_equal(again.weights, space.weights)
    with pytest.raises(InputError, match="space.weights"):
        space_from_doc({"weights": ["a", "b"]})
    with pytest.raises(InputError, match="missing"):
        space_from_doc({})


def test_fusion_round_trip():
    fam = random_fusion_family(3, 4, 2, seed=5)
    F = fam.members[0]
    doc = fusion_to_doc(F)
    again = fusion_from_doc(doc, fam.space, "m")
    np.testing.assert_array_equal(again.weights, F.weights)
    for Va, Vb in zip(again.subspaces, F.subspaces):
        np.testing.assert_array_equal(Va.basis, Vb.basis)


def test_woven_family_instance_round_trip():
    fam = random_fusion_family(3, 4, 2, seed=9)
    doc = instance_to_doc(fam)
    assert doc["kind"] == "woven_family"
    kind, again = instance_from_doc(doc)
    assert kind == "woven_family"
    assert isinstance(again, WovenFamily)
    np.testing.assert_array_equal(
        again.node_terms(), fam.node_terms()
    )


def test_cframe_family_instance_round_trip():
    frames = parseval_weaving_pair(0.5)
    doc = instance_to_doc(list(frames))
    assert doc["kind"] == "cframe_family"
    kind, again = instance_from_doc(doc)
    assert kind == "cframe_family"
    for fa, fb in zip(again, frames):
        np.testing.assert_array_equal(fa.vectors, fb.vectors)
        np.testing.assert_array_equal(fa.space.weights, fb.space.weights)


def test_product_lift_instance_round_trip():
    rng = np.random.default_rng(12)
    inner1 = CFrame(MeasureSpace(np.ones(3)), rng.standard_normal((3, 2)))
    inner2 = CFrame(MeasureSpace(np.ones(3)), rng.standard_normal((3, 2)))
    lift = lift_product(
        [inner1, inner2], MeasureSpace([1.0, 2.0]), rng.uniform(0.5, 1.5, (2, 2))
    )
    doc = instance_to_doc(lift)
    assert doc["kind"] == "product_lift"
    kind, again = instance_from_doc(doc)
    assert kind == "product_lift"
    np.testing.assert_array_equal(again.member_weights, lift.member_weights)
    for fa, fb in zip(again.inner_frames, lift.inner_frames):
        np.testing.assert_array_equal(fa.vectors, fb.vectors)
    np.testing.assert_allclose(
        cframe_operator(again.product_frames[0]),
        cframe_operator(lift.product_frames[0]),
        atol=1e-14,
    )


def test_instance_doc_schema_errors_carry_paths():
    with pytest.raises(InputError, match="instance.kind"):
        instance_from_doc({"kind": "mystery"})
    with pytest.raises(InputError, match="instance.members"):
        instance_from_doc(
            {"kind": "woven_family", "space": {"weights": [1.0]}, "members": []}
        )
    fam = random_fusion_family(2, 2, 2, seed=2)
    doc = instance_to_doc(fam)
    del doc["members"][0]["weights"]
    with pytest.raises(InputError, match=r"instance.members\[0\].weights"):
        instance_from_doc(doc)
    doc2 = instance_to_doc(fam)
    doc2["members"][0]["subspaces"][0] = [["not-complex"]]
    with pytest.raises(InputError, match=r"subspaces\[0\]"):
        instance_from_doc(doc2)


def test_instance_to_doc_rejects_unknown_objects():
    with pytest.raises(InputError):
        instance_to_doc(42)
    with pytest.raises(InputError):
        instance_to_doc([])


def test_load_json_reports_line_and_column(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "a": 1,\n  "b": [1, 2,]\n}\n')
    with pytest.raises(InputError, match=r"bad\.json:3:"):
        load_json(bad)
    with pytest.raises(InputError, match="missing.json"):
        load_json(tmp_path / "missing.json")


def test_dump_json_deterministic(tmp_path):
    doc = {"b": 1, "a": [1.5, "x"], "nested": {"z": True}}
    t1 = dump_json(doc)
    t2 = dump_json(doc)
    assert t1 == t2
    out = tmp_path / "doc.json"
    dump_json(doc, out)
    assert out.read_text() == t1 + "\n"
    assert load_json(out) == doc


def test_dump_json_refuses_nan():
    with pytest.raises(ValueError):
        dump_json({"x": float("nan")})


def test_family_doc_feeds_enumeration():
    # serialized instances drive the engine identically to the originals
    from cweave import universal_bounds

    fam = family_from_cframes(parseval_weaving_pair(0.5))
    kind, again = instance_from_doc(instance_to_doc(fam))
    a = universal_bounds(fam)
    b = universal_bounds(again)
    assert a.lower == b.lower and a.upper == b.upper
    assert a.lower_witness.as_list() == b.lower_witness.as_list()
