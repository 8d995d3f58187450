"""Report emitter: aggregates scenario results into a summary table of
worst observed approximation ratios and largest certificate gammas per
(algorithm, constraint class, objective class), side by side with the
theoretical bounds, then writes aligned text, CSV, JSON, and figures."""

from __future__ import annotations

import csv
import io
import json
import os
from fractions import Fraction
from typing import Iterable

from stablemax.fileformat import REPORT_FORMAT
from stablemax.scenarios import ScenarioResult

COLUMNS = (
    "algorithm",
    "constraint",
    "objective",
    "observed_ratio",
    "ratio_bound",
    "observed_gamma",
    "gamma_bound",
    "instances",
    "flag",
)


def collect_rows(results: Iterable[ScenarioResult]) -> list[dict]:
    rows = []
    for result in results:
        for row in result.data.get("report_rows", ()):
            full = {c: row.get(c, "") for c in COLUMNS}
            full["scenario"] = result.scenario_id
            rows.append(full)
    return rows


def render_text(rows: list[dict]) -> str:
    header = ["scenario", *COLUMNS]
    table = [header] + [
        [str(r.get(c, "")) for c in header] for r in rows
    ]
    widths = [max(len(line[i]) for line in table) for i in range(len(header))]
    out = []
    for i, line in enumerate(table):
        out.append("  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip())
        if i == 0:
            out.append("  ".join("-" * w for w in widths))
    return "\n".join(out) + "\n"


def render_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=["scenario", *COLUMNS])
    writer.writeheader()
    for r in rows:
        writer.writerow({k: r.get(k, "") for k in ["scenario", *COLUMNS]})
    return buf.getvalue()


def report_doc(results: Iterable[ScenarioResult]) -> dict:
    results = list(results)
    return {
        "format": REPORT_FORMAT,
        "rows": collect_rows(results),
        "scenarios": [
            {
                "id": r.scenario_id,
                "params": {k: str(v) for k, v in r.params.items()},
                "passed": r.passed,
                "claims": [
                    {
                        "name": c.name,
                        "expected": c.expected,
                        "actual": c.actual,
                        "passed": c.passed,
                        "note": c.note,
                    }
                    for c in r.claims
                ],
            }
            for r in results
        ],
    }


def _as_float(text: str) -> float | None:
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        return None


def render_figures(rows: list[dict], out_dir: str) -> list[str]:
    """Bar charts comparing observed worst ratios and certificate gammas to
    their theoretical bounds; skips rows without numeric entries."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    paths: list[str] = []

    def chart(filename, pairs, title, ylabel):
        if not pairs:
            return
        labels = [p[0] for p in pairs]
        observed = [p[1] for p in pairs]
        bound = [p[2] for p in pairs]
        x = range(len(pairs))
        fig, ax = plt.subplots(figsize=(max(6, 1.1 * len(pairs)), 4.2))
        ax.bar([i - 0.2 for i in x], observed, width=0.4, label="observed")
        ax.bar([i + 0.2 for i in x], bound, width=0.4, label="bound")
        ax.set_xticks(list(x))
        ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
        ax.set_ylabel(ylabel)
        ax.set_title(title)
        ax.legend()
        fig.tight_layout()
        path = os.path.join(out_dir, filename)
        fig.savefig(path, dpi=150)
        plt.close(fig)
        paths.append(path)

    ratio_pairs = []
    gamma_pairs = []
    for r in rows:
        label = f"{r['algorithm']}\n{r['constraint']} / {r['objective']}"
        obs_ratio, ratio_bound = _as_float(str(r["observed_ratio"])), _as_float(str(r["ratio_bound"]))
        if obs_ratio is not None and ratio_bound is not None:
            ratio_pairs.append((label, obs_ratio, ratio_bound))
        obs_gamma = _as_float(str(r["observed_gamma"]))
        gamma_bound = _as_float(str(r["gamma_bound"]).split()[0]) if r["gamma_bound"] else None
        if obs_gamma is not None and gamma_bound is not None:
            gamma_pairs.append((label, obs_gamma, gamma_bound))

    chart(
        "worst_ratios.png",
        ratio_pairs,
        "Worst observed value ratio vs guaranteed bound",
        "value / optimum",
    )
    chart(
        "certificate_gammas.png",
        gamma_pairs,
        "Largest certificate gamma vs recovery threshold",
        "gamma",
    )
    return paths


def emit_report(
    results: Iterable[ScenarioResult], out_dir: str, figures: bool = True
) -> dict:
    """Write report.txt / report.csv / report.json (+ PNG figures) and
    return the structured document. Empty input produces empty tables."""
    results = list(results)
    os.makedirs(out_dir, exist_ok=True)
    rows = collect_rows(results)
    doc = report_doc(results)
    with open(os.path.join(out_dir, "report.txt"), "w") as fh:
        fh.write(render_text(rows))
    with open(os.path.join(out_dir, "report.csv"), "w") as fh:
        fh.write(render_csv(rows))
    with open(os.path.join(out_dir, "report.json"), "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    if figures:
        doc["figures"] = render_figures(rows, out_dir)
    return doc
