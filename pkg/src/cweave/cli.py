"""Command-line interface.

Verbs: ``run`` executes a scenario and writes a JSON report; ``gen`` writes
a named instance to a JSON file; ``bounds`` prints member and universal
bounds for an instance file; ``report`` renders an existing report to a CSV
summary and PNG figures.  Exit codes: 0 all checks passed (or were expected
inapplicable), 1 a check failed or was unexpectedly inapplicable, 2 bad
input (malformed document, unknown field, enumeration budget exceeded).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .hilbert import BudgetExceededError, InputError
from .frames import cframe_bounds, fusion_bounds
from .scenarios import (
    _family_for,
    build_strategy,
    report_exit_code,
    resolve_instance,
    run_scenario,
)
from .serialize import dump_json, load_json
from .weaving import universal_bounds


def _cmd_run(args) -> int:
    doc = load_json(args.scenario)
    base_dir = Path(args.scenario).resolve().parent
    report = run_scenario(
        doc,
        base_dir=base_dir,
        budget_override=args.budget,
        seed_override=args.seed,
    )
    out_path = args.out
    if out_path is None and isinstance(doc.get("output"), str):
        out_path = str(base_dir / doc["output"])
    if out_path is None:
        print(dump_json(report))
    else:
        Path(out_path).parent.mkdir(parents=True, exist_ok=True)
        dump_json(report, out_path)
        for i, entry in enumerate(report["checks"]):
            expect = entry["expect"]
            marker = entry["verdict"] + (
                "" if expect == "pass" else f" (expected {expect})"
            )
            print(f"check {i} {entry['check']}: {marker}")
        s = report["summary"]
        print(
            f"summary: {s['pass']} pass, {s['fail']} fail, "
            f"{s['inapplicable']} inapplicable, {s['unexpected']} unexpected"
        )
        print(f"report written to {out_path}")
    return report_exit_code(report)


def _parse_kv(pairs: list[str]) -> dict:
    params: dict = {}
    for pair in pairs:
        if "=" not in pair:
            raise InputError(f"generator parameter {pair!r} is not key=value")
        key, raw = pair.split("=", 1)
        if not key:
            raise InputError(f"generator parameter {pair!r} has an empty key")
        try:
            params[key] = json.loads(raw)
        except json.JSONDecodeError:
            params[key] = raw
    return params


def _cmd_gen(args) -> int:
    from .scenarios import _build_generator
    from .serialize import instance_to_doc

    params = _parse_kv(args.params)
    obj = _build_generator(args.name, params, "gen")
    dump_json(instance_to_doc(obj), args.out)
    print(f"instance written to {args.out}")
    return 0


def _cmd_bounds(args) -> int:
    doc = load_json(args.instance)
    from .serialize import instance_from_doc

    kind, obj = instance_from_doc(doc, where=f"instance({args.instance})")
    if args.samples is not None:
        sdoc = {"mode": "sampled", "count": args.samples}
    else:
        sdoc = {"mode": "exhaustive"}
    strategy = build_strategy(sdoc, args.seed or 0, args.budget)
    family = _family_for(kind, obj, "instance")
    if kind == "cframe_family":
        for i, frame in enumerate(obj):
            b = cframe_bounds(frame)
            print(f"member {i}: lower={b.lower!r} upper={b.upper!r}")
    else:
        for i, member in enumerate(family.members):
            b = fusion_bounds(member)
            print(f"member {i}: lower={b.lower!r} upper={b.upper!r}")
    ub = universal_bounds(family, strategy)
    tag = "certified" if ub.certified else "uncertified"
    print(f"universal ({tag}): lower={ub.lower!r} upper={ub.upper!r}")
    print(f"lower witness: {ub.lower_witness.as_list()}")
    print(f"upper witness: {ub.upper_witness.as_list()}")
    return 0


def _cmd_report(args) -> int:
    from .plots import render_report

    report = load_json(args.report)
    if not isinstance(report, dict) or "checks" not in report:
        raise InputError(f"{args.report}: not a report document (no 'checks' field)")
    out_dir = args.out_dir
    if out_dir is None:
        out_dir = str(Path(args.report).resolve().parent)
    written = render_report(report, out_dir)
    for path in written:
        print(f"wrote {path}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="cweave",
        description=(
            "Weaving bounds for fusion frames over discretized measure "
            "spaces: run certified checks, generate instances, and render "
            "reports."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario file and write a report")
    p_run.add_argument("scenario", help="scenario JSON file")
    p_run.add_argument("--out", help="report output path (default: scenario's "
                       "'output' field, else stdout)")
    p_run.add_argument("--budget", type=int, help="override the exhaustive budget")
    p_run.add_argument("--seed", type=int, help="override the scenario seed")
    p_run.set_defaults(fn=_cmd_run)

    p_gen = sub.add_parser("gen", help="generate a named instance file")
    p_gen.add_argument("name", help="generator name: parseval_weaving_pair, "
                       "shift_system or random_fusion_family")
    p_gen.add_argument("params", nargs="*", help="generator parameters as key=value")
    p_gen.add_argument("--out", required=True, help="instance output path")
    p_gen.set_defaults(fn=_cmd_gen)

    p_bounds = sub.add_parser(
        "bounds", help="print member and universal bounds of an instance file"
    )
    p_bounds.add_argument("instance", help="instance JSON file")
    p_bounds.add_argument("--budget", type=int, help="override the exhaustive budget")
    p_bounds.add_argument("--samples", type=int,
                          help="use sampled search with this many assignments")
    p_bounds.add_argument("--seed", type=int, help="seed for sampled search")
    p_bounds.set_defaults(fn=_cmd_bounds)

    p_report = sub.add_parser(
        "report", help="render a report file to summary.csv and figures"
    )
    p_report.add_argument("report", help="report JSON file")
    p_report.add_argument("--out-dir", help="directory for the rendered files "
                          "(default: the report's directory)")
    p_report.set_defaults(fn=_cmd_report)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (InputError, BudgetExceededError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
