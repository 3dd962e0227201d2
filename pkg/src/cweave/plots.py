"""Figure and CSV rendering for report documents.

Downstream of ``run``: takes a report dictionary (already computed, pure
data) and writes a delimited summary plus PNG figures next to it.  Uses the
Agg backend so rendering works headless.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

FIG_DPI = 150


def _check_label(entry: dict, index: int) -> str:
    return f"{index}:{entry['check']}"


def write_summary_csv(report: dict, path: Path) -> None:
    fields = [
        "index", "check", "verdict", "expect",
        "claimed_lower", "claimed_upper",
        "observed_lower", "observed_upper",
        "certified", "bounds_family", "notes",
    ]
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for i, entry in enumerate(report.get("checks", [])):
            claimed = entry.get("claimed") or {}
            observed = entry.get("observed") or {}
            writer.writerow(
                {
                    "index": i,
                    "check": entry.get("check", ""),
                    "verdict": entry.get("verdict", ""),
                    "expect": entry.get("expect", ""),
                    "claimed_lower": claimed.get("lower", ""),
                    "claimed_upper": claimed.get("upper", ""),
                    "observed_lower": observed.get("lower", ""),
                    "observed_upper": observed.get("upper", ""),
                    "certified": observed.get("certified", ""),
                    "bounds_family": observed.get("family", ""),
                    "notes": entry.get("notes", ""),
                }
            )


def plot_bounds(report: dict, path: Path) -> bool:
    """Claimed vs observed bound intervals, one row per check with bounds."""
    rows = []
    for i, entry in enumerate(report.get("checks", [])):
        claimed = entry.get("claimed")
        observed = entry.get("observed")
        if claimed is None or observed is None:
            continue
        rows.append((_check_label(entry, i), claimed, observed, entry["verdict"]))
    if not rows:
        return False
    fig, ax = plt.subplots(figsize=(8, 1.2 + 0.6 * len(rows)))
    for y, (label, claimed, observed, verdict) in enumerate(rows):
        ax.plot(
            [claimed["lower"], claimed["upper"]], [y - 0.12, y - 0.12],
            lw=4, color="tab:blue", solid_capstyle="butt",
            label="claimed" if y == 0 else None,
        )
        color = {"pass": "tab:green", "fail": "tab:red"}.get(verdict, "tab:orange")
        ax.plot(
            [observed["lower"], observed["upper"]], [y + 0.12, y + 0.12],
            lw=4, color=color, solid_capstyle="butt",
            label="observed" if y == 0 else None,
        )
    ax.set_yticks(range(len(rows)))
    ax.set_yticklabels([r[0] for r in rows])
    ax.invert_yaxis()
    ax.set_xlabel("frame bound")
    ax.set_title("claimed vs observed universal bounds")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=FIG_DPI)
    plt.close(fig)
    return True


def plot_spectrum(entry: dict, index: int, path: Path) -> bool:
    """Per-partition extreme eigenvalues for one check, when embedded."""
    observed = entry.get("observed") or {}
    spectrum = observed.get("spectrum")
    if not spectrum:
        return False
    lows = spectrum["lower"]
    highs = spectrum["upper"]
    x = range(len(lows))
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.plot(x, highs, lw=0.8, color="tab:orange", label="largest eigenvalue")
    ax.plot(x, lows, lw=0.8, color="tab:blue", label="smallest eigenvalue")
    ax.axhline(observed["lower"], color="tab:blue", ls="--", lw=0.8)
    ax.axhline(observed["upper"], color="tab:orange", ls="--", lw=0.8)
    claimed = entry.get("claimed")
    if claimed:
        ax.axhline(claimed["lower"], color="tab:green", ls=":", lw=1.0,
                   label="claimed lower")
        ax.axhline(claimed["upper"], color="tab:red", ls=":", lw=1.0,
                   label="claimed upper")
    ax.set_xlabel("partition (enumeration order)")
    ax.set_ylabel("eigenvalue")
    ax.set_title(f"weaving spectrum, check {index}: {entry['check']}")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=FIG_DPI)
    plt.close(fig)
    return True


def render_report(report: dict, out_dir) -> list[Path]:
    """Write summary.csv and figures into out_dir; returns the paths written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    csv_path = out / "summary.csv"
    write_summary_csv(report, csv_path)
    written.append(csv_path)
    bounds_path = out / "bounds.png"
    if plot_bounds(report, bounds_path):
        written.append(bounds_path)
    for i, entry in enumerate(report.get("checks", [])):
        spath = out / f"spectrum_{i:02d}_{entry['check']}.png"
        if plot_spectrum(entry, i, spath):
            written.append(spath)
    return written
