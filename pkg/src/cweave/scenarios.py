"""Scenario documents: a declarative instance plus a list of checks.

A scenario names an instance (inline document, file reference, or named
generator with parameters), the checks to run on it, a search strategy and
tolerances.  ``run_scenario`` executes the checks and assembles a report
that echoes a normalized, self-contained scenario (file references are
inlined) so that re-running the report's own scenario reproduces it.
"""

from __future__ import annotations

import time
from pathlib import Path

import numpy as np

from . import __version__
from .hilbert import (
    DEFAULT_ENUM_BUDGET,
    InputError,
    MeasureSpace,
    span_of,
)
from .frames import CFrame
from .weaving import (
    Certificate,
    Descent,
    Exhaustive,
    LiftedProduct,
    Sampled,
    Strategy,
    WovenFamily,
    certify_bessel_sum,
    certify_closeness,
    certify_operator_image,
    certify_product_equivalence,
    certify_removal,
    certify_subset_extension,
    certify_subspace_intersection,
    certify_upper_not_optimal,
    family_from_cframes,
)
from .perturbation import (
    ChainScalars,
    ReferenceScalars,
    certify_perturbation,
    certify_perturbation_chain,
)
from .instances import (
    ShiftSystemParams,
    parseval_weaving_pair,
    random_fusion_family,
    shift_system,
)
from .serialize import (
    decode_complex,
    decode_matrix,
    decode_vector,
    instance_from_doc,
    instance_to_doc,
    load_json,
)

DEFAULT_TOLERANCES = {
    "bracket": 1e-8,
    "commute_gate": 1e-8,
    "hypothesis_slack": 1e-10,
    "margin_rel": 1e-6,
}

CHECK_NAMES = (
    "bessel_sum",
    "operator_image",
    "subspace_intersection",
    "subset_extension",
    "removal",
    "closeness",
    "upper_not_optimal",
    "product_equivalence",
    "perturbation",
    "perturbation_chain",
)


def _build_generator(name: str, params: dict, where: str):
    if not isinstance(params, dict):
        raise InputError(f"{where}.params: expected an object")
    p = dict(params)
    try:
        if name == "parseval_weaving_pair":
            epsilon = p.pop("epsilon", None)
            if epsilon is None:
                raise InputError(f"{where}.params.epsilon: required")
            weights = p.pop("weights", None)
            _reject_extra(p, where)
            return list(parseval_weaving_pair(float(epsilon), weights))
        if name == "shift_system":
            dimension = int(p.pop("dimension", 0))
            window_spec = p.pop("window", "random")
            seed = int(p.pop("seed", 0))
            scale = decode_complex(p.pop("scale", "1.5+0j"), f"{where}.params.scale")
            lattice_spec = p.pop("lattice", "full")
            _reject_extra(p, where)
            if isinstance(window_spec, list):
                window = decode_vector(window_spec, f"{where}.params.window")
            elif window_spec == "impulse":
                window = np.zeros(dimension, dtype=np.complex128)
                if dimension >= 1:
                    window[0] = 1.0
            elif window_spec == "random":
                rng = np.random.default_rng(seed)
                window = rng.standard_normal(dimension) + 1j * rng.standard_normal(
                    dimension
                )
                nrm = float(np.linalg.norm(window))
                if nrm > 0:
                    window = window / nrm
            else:
                raise InputError(
                    f"{where}.params.window: expected 'impulse', 'random' or a vector"
                )
            lattice = None
            if lattice_spec != "full":
                if not isinstance(lattice_spec, list):
                    raise InputError(
                        f"{where}.params.lattice: expected 'full' or a list of [a, b]"
                    )
                lattice = tuple((int(a), int(b)) for a, b in lattice_spec)
            return list(
                shift_system(ShiftSystemParams(dimension, window, lattice, scale))
            )
        if name == "random_fusion_family":
            dimension = int(p.pop("dimension", 0))
            nodes = int(p.pop("nodes", 0))
            members = int(p.pop("members", 2))
            dim_min = p.pop("dim_min", None)
            dim_max = p.pop("dim_max", None)
            weight_min = float(p.pop("weight_min", 0.5))
            weight_max = float(p.pop("weight_max", 1.5))
            seed = int(p.pop("seed", 0))
            measure_weights = p.pop("measure_weights", None)
            _reject_extra(p, where)
            dim_range = None
            if dim_min is not None or dim_max is not None:
                dim_range = (
                    int(dim_min if dim_min is not None else 1),
                    int(dim_max if dim_max is not None else dimension),
                )
            return random_fusion_family(
                dimension,
                nodes,
                members,
                dim_range=dim_range,
                weight_range=(weight_min, weight_max),
                seed=seed,
                measure_weights=measure_weights,
            )
    except (TypeError, ValueError) as e:
        if isinstance(e, InputError):
            raise
        raise InputError(f"{where}.params: {e}") from None
    raise InputError(
        f"{where}.generator: unknown generator {name!r} (expected "
        "parseval_weaving_pair, shift_system or random_fusion_family)"
    )


def _reject_extra(params: dict, where: str):
    if params:
        extra = ", ".join(sorted(params))
        raise InputError(f"{where}.params: unknown parameter(s) {extra}")


def resolve_instance(idoc, base_dir: Path | None = None):
    """Resolve a scenario instance entry to (kind, object, echo_doc)."""
    where = "instance"
    if not isinstance(idoc, dict):
        raise InputError(f"{where}: expected an object")
    if "generator" in idoc:
        name = idoc["generator"]
        params = idoc.get("params", {})
        obj = _build_generator(name, params, where)
        if isinstance(obj, list):
            kind = "cframe_family"
            obj = tuple(obj)
        else:
            kind = "woven_family"
        return kind, obj, {"generator": name, "params": params}
    if "file" in idoc:
        path = Path(idoc["file"])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        doc = load_json(path)
        kind, obj = instance_from_doc(doc, where=f"{where}({path})")
        return kind, obj, instance_to_doc_echo(kind, obj)
    if "kind" in idoc:
        kind, obj = instance_from_doc(idoc, where=where)
        return kind, obj, instance_to_doc_echo(kind, obj)
    raise InputError(
        f"{where}: expected one of 'generator', 'file' or an inline 'kind' document"
    )


def instance_to_doc_echo(kind: str, obj) -> dict:
    if kind == "cframe_family":
        return instance_to_doc(list(obj))
    return instance_to_doc(obj)


def build_strategy(sdoc, seed: int, budget_override: int | None = None) -> Strategy:
    where = "strategy"
    if sdoc is None:
        sdoc = {"mode": "exhaustive"}
    if not isinstance(sdoc, dict):
        raise InputError(f"{where}: expected an object")
    mode = sdoc.get("mode", "exhaustive")
    try:
        if mode == "exhaustive":
            budget = int(sdoc.get("budget", DEFAULT_ENUM_BUDGET))
            if budget_override is not None:
                budget = budget_override
            return Exhaustive(budget)
        if mode == "sampled":
            return Sampled(int(sdoc["count"]), int(sdoc.get("seed", seed)))
        if mode == "descent":
            return Descent(int(sdoc["restarts"]), int(sdoc.get("seed", seed)))
    except KeyError as e:
        raise InputError(f"{where}.{e.args[0]}: required for mode {mode!r}") from None
    except (TypeError, ValueError) as e:
        raise InputError(f"{where}: {e}") from None
    raise InputError(
        f"{where}.mode: unknown mode {mode!r} (expected exhaustive, sampled or descent)"
    )


def strategy_to_doc(strategy: Strategy) -> dict:
    if isinstance(strategy, Exhaustive):
        return {"mode": "exhaustive", "budget": strategy.budget}
    if isinstance(strategy, Sampled):
        return {"mode": "sampled", "count": strategy.count, "seed": strategy.seed}
    return {"mode": "descent", "restarts": strategy.restarts, "seed": strategy.seed}


def _family_for(kind: str, obj, where: str) -> WovenFamily:
    if kind == "woven_family":
        return obj
    if kind == "cframe_family":
        return family_from_cframes(obj)
    if kind == "product_lift":
        return obj.fusion_family
    raise InputError(f"{where}: unsupported instance kind {kind!r}")


def _scalars_from_doc(sdoc, where: str, chain: bool, reference: int = 0):
    if sdoc == "default" or sdoc is None:
        return None
    if not isinstance(sdoc, dict):
        raise InputError(f"{where}: expected 'default' or an object")
    try:
        lam = np.asarray(sdoc["lam"], dtype=np.float64)
        eta = np.asarray(sdoc.get("eta", np.zeros_like(lam)), dtype=np.float64)
        gamma = np.asarray(sdoc.get("gamma", np.zeros_like(lam)), dtype=np.float64)
    except KeyError:
        raise InputError(f"{where}.lam: required") from None
    except (TypeError, ValueError) as e:
        raise InputError(f"{where}: {e}") from None
    try:
        if chain:
            return ChainScalars(lam, eta, gamma)
        return ReferenceScalars(reference, lam, eta, gamma)
    except InputError as e:
        raise InputError(f"{where}: {e}") from None


def run_check(
    cdoc: dict,
    kind: str,
    obj,
    strategy: Strategy,
    tols: dict,
    collect_spectrum: bool,
    where: str,
) -> Certificate:
    name = cdoc.get("check")
    if name not in CHECK_NAMES:
        raise InputError(
            f"{where}.check: unknown check {name!r} (expected one of "
            + ", ".join(CHECK_NAMES)
            + ")"
        )
    bracket = float(tols["bracket"])
    if name == "product_equivalence":
        if kind != "product_lift":
            raise InputError(
                f"{where}: product_equivalence needs a product_lift instance"
            )
        return certify_product_equivalence(
            obj, strategy, tol=bracket, collect_spectrum=collect_spectrum
        )
    family = _family_for(kind, obj, where)
    if name == "bessel_sum":
        return certify_bessel_sum(
            family, strategy, tol=bracket, collect_spectrum=collect_spectrum
        )
    if name == "operator_image":
        U = decode_matrix(cdoc.get("operator"), f"{where}.operator")
        return certify_operator_image(
            family, U, strategy=strategy, tol=bracket,
            collect_spectrum=collect_spectrum,
        )
    if name == "subspace_intersection":
        spanning = cdoc.get("spanning")
        if not isinstance(spanning, list):
            raise InputError(f"{where}.spanning: expected a list of vectors")
        vecs = [
            decode_vector(v, f"{where}.spanning[{i}]")
            for i, v in enumerate(spanning)
        ]
        W = span_of(vecs, ambient_dim=family.dim)
        return certify_subspace_intersection(
            family, W, strategy,
            gate_tol=float(tols["commute_gate"]), tol=bracket,
            collect_spectrum=collect_spectrum,
        )
    if name == "subset_extension":
        nodes = cdoc.get("nodes")
        if not isinstance(nodes, list):
            raise InputError(f"{where}.nodes: expected a list of node indices")
        return certify_subset_extension(
            family, nodes, strategy, tol=bracket,
            collect_spectrum=collect_spectrum,
        )
    if name == "removal":
        nodes = cdoc.get("nodes")
        if not isinstance(nodes, list):
            raise InputError(f"{where}.nodes: expected a list of node indices")
        reference = int(cdoc.get("reference", 0))
        removed_mass = cdoc.get("removed_mass")
        return certify_removal(
            family, nodes, reference,
            removed_mass=None if removed_mass is None else float(removed_mass),
            strategy=strategy, tol=bracket, collect_spectrum=collect_spectrum,
        )
    if name == "closeness":
        scale = cdoc.get("scale")
        return certify_closeness(
            family, scale=None if scale is None else float(scale),
            strategy=strategy, tol=bracket, collect_spectrum=collect_spectrum,
        )
    if name == "upper_not_optimal":
        margin_rel = float(cdoc.get("margin_rel", tols["margin_rel"]))
        return certify_upper_not_optimal(
            family, strategy, margin_rel=margin_rel, tol=bracket,
            collect_spectrum=collect_spectrum,
        )
    if name == "perturbation":
        reference = int(cdoc.get("reference", 0))
        scalars = _scalars_from_doc(
            cdoc.get("scalars"), f"{where}.scalars", chain=False, reference=reference
        )
        return certify_perturbation(
            family, scalars, reference=reference, strategy=strategy,
            tol=bracket, slack=float(tols["hypothesis_slack"]),
            collect_spectrum=collect_spectrum,
        )
    if name == "perturbation_chain":
        scalars = _scalars_from_doc(
            cdoc.get("scalars"), f"{where}.scalars", chain=True
        )
        return certify_perturbation_chain(
            family, scalars, strategy=strategy,
            tol=bracket, slack=float(tols["hypothesis_slack"]),
            collect_spectrum=collect_spectrum,
        )
    raise AssertionError(f"unhandled check {name}")


def run_scenario(
    doc: dict,
    base_dir: Path | None = None,
    budget_override: int | None = None,
    seed_override: int | None = None,
) -> dict:
    """Execute a scenario document and return the report dictionary."""
    t0 = time.perf_counter()
    if not isinstance(doc, dict):
        raise InputError("scenario: expected a JSON object")
    unknown = set(doc) - {
        "instance", "checks", "strategy", "tolerances", "seed",
        "collect_spectrum", "output",
    }
    if unknown:
        raise InputError(f"scenario: unknown field(s) {', '.join(sorted(unknown))}")
    seed = int(doc.get("seed", 0))
    if seed_override is not None:
        seed = seed_override
    if "instance" not in doc:
        raise InputError("scenario.instance: required")
    kind, obj, echo_instance = resolve_instance(doc["instance"], base_dir)
    checks_doc = doc.get("checks")
    if not isinstance(checks_doc, list) or not checks_doc:
        raise InputError("scenario.checks: expected a nonempty list")
    strategy = build_strategy(doc.get("strategy"), seed, budget_override)
    tols = dict(DEFAULT_TOLERANCES)
    tols_doc = doc.get("tolerances", {})
    if not isinstance(tols_doc, dict):
        raise InputError("scenario.tolerances: expected an object")
    for k, v in tols_doc.items():
        if k not in DEFAULT_TOLERANCES:
            raise InputError(f"scenario.tolerances.{k}: unknown tolerance")
        tols[k] = float(v)
    collect_spectrum = bool(doc.get("collect_spectrum", False))

    checks_out = []
    check_seconds = []
    counts = {"pass": 0, "fail": 0, "inapplicable": 0, "unexpected": 0}
    echo_checks = []
    for i, cdoc in enumerate(checks_doc):
        where = f"scenario.checks[{i}]"
        if not isinstance(cdoc, dict):
            raise InputError(f"{where}: expected an object")
        expect = cdoc.get("expect", "pass")
        if expect not in ("pass", "inapplicable"):
            raise InputError(
                f"{where}.expect: expected 'pass' or 'inapplicable', got {expect!r}"
            )
        tc = time.perf_counter()
        cert = run_check(cdoc, kind, obj, strategy, tols, collect_spectrum, where)
        check_seconds.append(time.perf_counter() - tc)
        counts[cert.verdict] += 1
        if cert.verdict == "fail" or (
            cert.verdict == "inapplicable" and expect != "inapplicable"
        ):
            counts["unexpected"] += 1
        entry = cert.to_dict()
        entry["expect"] = expect
        checks_out.append(entry)
        echo_checks.append(dict(cdoc))

    scenario_echo: dict = {
        "instance": echo_instance,
        "checks": echo_checks,
        "strategy": strategy_to_doc(strategy),
        "tolerances": tols,
        "seed": seed,
        "collect_spectrum": collect_spectrum,
    }
    if "output" in doc:
        scenario_echo["output"] = doc["output"]
    report = {
        "tool": "cweave",
        "version": __version__,
        "seed": seed,
        "strategy": strategy_to_doc(strategy),
        "tolerances": tols,
        "instance_kind": kind,
        "scenario": scenario_echo,
        "checks": checks_out,
        "summary": counts,
        "timings": {
            "total_seconds": time.perf_counter() - t0,
            "check_seconds": check_seconds,
        },
    }
    return report


def report_exit_code(report: dict) -> int:
    """0 when every check passed or was expected inapplicable, else 1."""
    return 1 if report["summary"]["unexpected"] > 0 else 0
