"""JSON formats for instances, scenarios and reports.

Complex scalars are strings in Python literal form ("1.5+2j"); encoding
uses repr so decode(encode(z)) == z exactly.  Matrices are row-major nested
lists of such strings; node masses and other nonnegative reals are plain
JSON numbers.  Parse failures raise InputError with a location: file,
line and column for syntax errors, a JSON path for schema errors.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .hilbert import InputError, MeasureSpace, Subspace
from .frames import CFrame, CFusionFrame
from .weaving import LiftedProduct, WovenFamily, lift_product


def encode_complex(z: complex) -> str:
    return repr(complex(z)).strip("()")


def decode_complex(s, where: str = "value") -> complex:
    if isinstance(s, (int, float)) and not isinstance(s, bool):
        return complex(s)
    if not isinstance(s, str):
        raise InputError(f"{where}: expected a complex literal string, got {type(s).__name__}")
    try:
        return complex(s.replace(" ", ""))
    except ValueError:
        raise InputError(f"{where}: invalid complex literal {s!r}") from None


def encode_vector(v) -> list[str]:
    return [encode_complex(z) for z in np.asarray(v, dtype=np.complex128)]


def decode_vector(obj, where: str = "vector") -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise InputError(f"{where}: expected a nonempty list of complex literals")
    return np.array(
        [decode_complex(z, f"{where}[{i}]") for i, z in enumerate(obj)],
        dtype=np.complex128,
    )


def encode_matrix(M) -> list[list[str]]:
    A = np.asarray(M, dtype=np.complex128)
    return [[encode_complex(z) for z in row] for row in A]


def decode_matrix(obj, where: str = "matrix") -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise InputError(f"{where}: expected a nonempty list of rows")
    rows = [decode_vector(r, f"{where}[{i}]") for i, r in enumerate(obj)]
    width = rows[0].size
    if any(r.size != width for r in rows):
        raise InputError(f"{where}: rows have mixed lengths")
    return np.stack(rows)


def _require(doc: dict, key: str, where: str):
    if not isinstance(doc, dict):
        raise InputError(f"{where}: expected an object")
    if key not in doc:
        raise InputError(f"{where}.{key}: missing required field")
    return doc[key]


def _masses(obj, where: str) -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise InputError(f"{where}: expected a nonempty list of node masses")
    try:
        return np.array([float(x) for x in obj], dtype=np.float64)
    except (TypeError, ValueError):
        raise InputError(f"{where}: node masses must be numbers") from None


def space_to_doc(space: MeasureSpace) -> dict:
    return {"weights": [float(w) for w in space.weights]}


def space_from_doc(doc, where: str = "space") -> MeasureSpace:
    w = _masses(_require(doc, "weights", where), f"{where}.weights")
    try:
        return MeasureSpace(w)
    except InputError as e:
        raise InputError(f"{where}: {e}") from None


def cframe_to_doc(frame: CFrame) -> dict:
    return {"vectors": encode_matrix(frame.vectors)}


def cframe_from_doc(doc, space: MeasureSpace, where: str) -> CFrame:
    vecs = decode_matrix(_require(doc, "vectors", where), f"{where}.vectors")
    try:
        return CFrame(space, vecs)
    except InputError as e:
        raise InputError(f"{where}: {e}") from None


def fusion_to_doc(F: CFusionFrame) -> dict:
    return {
        "weights": [float(v) for v in F.weights],
        "subspaces": [encode_matrix(V.basis) for V in F.subspaces],
    }


def fusion_from_doc(doc, space: MeasureSpace, where: str) -> CFusionFrame:
    v_raw = _require(doc, "weights", where)
    if not isinstance(v_raw, list):
        raise InputError(f"{where}.weights: expected a list of numbers")
    subs_raw = _require(doc, "subspaces", where)
    if not isinstance(subs_raw, list):
        raise InputError(f"{where}.subspaces: expected a list of basis matrices")
    subs = []
    for j, b in enumerate(subs_raw):
        B = decode_matrix(b, f"{where}.subspaces[{j}]")
        try:
            subs.append(Subspace(B))
        except InputError as e:
            raise InputError(f"{where}.subspaces[{j}]: {e}") from None
    try:
        return CFusionFrame(space, tuple(subs), np.asarray(v_raw, dtype=np.float64))
    except (InputError, TypeError, ValueError) as e:
        raise InputError(f"{where}: {e}") from None


def instance_to_doc(obj) -> dict:
    """Serialize a woven family, a list of vector frames, or a lifted product."""
    if isinstance(obj, WovenFamily):
        return {
            "kind": "woven_family",
            "dimension": obj.dim,
            "space": space_to_doc(obj.space),
            "members": [fusion_to_doc(F) for F in obj.members],
        }
    if isinstance(obj, (list, tuple)) and obj and all(
        isinstance(f, CFrame) for f in obj
    ):
        frames = list(obj)
        return {
            "kind": "cframe_family",
            "dimension": frames[0].dim,
            "space": space_to_doc(frames[0].space),
            "members": [cframe_to_doc(f) for f in frames],
        }
    if isinstance(obj, LiftedProduct):
        return {
            "kind": "product_lift",
            "dimension": obj.inner_frames[0].dim,
            "outer_space": space_to_doc(obj.outer_space),
            "member_weights": [
                [float(v) for v in row] for row in obj.member_weights
            ],
            "inners": [
                {"space": space_to_doc(f.space), "vectors": encode_matrix(f.vectors)}
                for f in obj.inner_frames
            ],
        }
    raise InputError(f"cannot serialize {type(obj).__name__} as an instance")


def instance_from_doc(doc, where: str = "instance"):
    """Parse an instance document; returns (kind, object)."""
    kind = _require(doc, "kind", where)
    if kind == "woven_family":
        space = space_from_doc(_require(doc, "space", where), f"{where}.space")
        members_raw = _require(doc, "members", where)
        if not isinstance(members_raw, list) or len(members_raw) < 2:
            raise InputError(f"{where}.members: need at least two members")
        members = tuple(
            fusion_from_doc(mdoc, space, f"{where}.members[{i}]")
            for i, mdoc in enumerate(members_raw)
        )
        try:
            return kind, WovenFamily(members)
        except InputError as e:
            raise InputError(f"{where}: {e}") from None
    if kind == "cframe_family":
        space = space_from_doc(_require(doc, "space", where), f"{where}.space")
        members_raw = _require(doc, "members", where)
        if not isinstance(members_raw, list) or len(members_raw) < 2:
            raise InputError(f"{where}.members: need at least two members")
        frames = tuple(
            cframe_from_doc(mdoc, space, f"{where}.members[{i}]")
            for i, mdoc in enumerate(members_raw)
        )
        if len({f.dim for f in frames}) != 1:
            raise InputError(f"{where}.members: mixed vector dimensions")
        return kind, frames
    if kind == "product_lift":
        outer = space_from_doc(
            _require(doc, "outer_space", where), f"{where}.outer_space"
        )
        inners_raw = _require(doc, "inners", where)
        if not isinstance(inners_raw, list) or len(inners_raw) < 2:
            raise InputError(f"{where}.inners: need at least two inner frames")
        inners = []
        for i, idoc in enumerate(inners_raw):
            ispace = space_from_doc(
                _require(idoc, "space", f"{where}.inners[{i}]"),
                f"{where}.inners[{i}].space",
            )
            inners.append(cframe_from_doc(idoc, ispace, f"{where}.inners[{i}]"))
        weights_raw = _require(doc, "member_weights", where)
        try:
            W = np.asarray(weights_raw, dtype=np.float64)
        except (TypeError, ValueError):
            raise InputError(
                f"{where}.member_weights: expected a rectangular number matrix"
            ) from None
        try:
            return kind, lift_product(inners, outer, W)
        except InputError as e:
            raise InputError(f"{where}: {e}") from None
    raise InputError(
        f"{where}.kind: unknown instance kind {kind!r} "
        "(expected woven_family, cframe_family or product_lift)"
    )


def load_json(path) -> dict:
    """Read a JSON file; syntax errors carry file:line:column."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise InputError(f"{p}: {e.strerror or e}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{p}:{e.lineno}:{e.colno}: {e.msg}") from None


def dump_json(doc, path=None) -> str:
    """Deterministic JSON text (two-space indent, stable key order)."""
    text = json.dumps(doc, indent=2, sort_keys=False, allow_nan=False)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text
