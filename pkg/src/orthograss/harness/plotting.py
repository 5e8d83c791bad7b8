"""Figures for campaign reports, rendered headless to image files."""

from __future__ import annotations

from collections import Counter
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

_PASS = "#3a7d44"
_FAIL = "#b33f40"


def _numeric_counts(records: list[dict]) -> dict[str, list]:
    series: dict[str, list] = {}
    for r in records:
        for key, val in r.get("counts", {}).items():
            if isinstance(val, bool) or not isinstance(val, int):
                continue
            series.setdefault(key, []).append(val)
    return series


def _category_counts(records: list[dict]) -> Counter:
    return Counter(str(r["counts"].get("kind") or r["counts"].get("config") or r["counts"].get("label"))
                   for r in records if r.get("counts"))


def render_report_figure(report: dict, path: str | Path) -> Path:
    """Verdict bar plus the distribution of the first numeric per-trial count."""
    path = Path(path)
    records = report["records"]
    series = _numeric_counts(records)
    cats = _category_counts(records)
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.4))

    ax = axes[0]
    ax.bar(["passed", "failed"], [report["passed"], report["failed"]], color=[_PASS, _FAIL])
    ax.set_title(f"{report['lemma']}  (seed {report['seed']})", fontsize=10)
    ax.set_ylabel("trials")
    for side in ("top", "right"):
        ax.spines[side].set_visible(False)

    ax = axes[1]
    if series:
        key = sorted(series)[0]
        vals = Counter(series[key])
        xs = sorted(vals)
        ax.bar([str(x) for x in xs], [vals[x] for x in xs], color="#4a6fa5")
        ax.set_xlabel(key)
        ax.set_ylabel("trials")
    elif cats and set(cats) != {"None"}:
        names = sorted(cats)
        ax.bar(names, [cats[n] for n in names], color="#4a6fa5")
        ax.tick_params(axis="x", labelrotation=30, labelsize=8)
    else:
        ax.text(0.5, 0.5, "no per-trial counts", ha="center", va="center", transform=ax.transAxes)
        ax.set_axis_off()
    for side in ("top", "right"):
        ax.spines[side].set_visible(False)

    fig.tight_layout()
    path.parent.mkdir(parents=True, exist_ok=True)
    # fixed metadata keeps repeated renders byte-stable for PNG
    fig.savefig(path, dpi=110, metadata={"Software": None} if path.suffix == ".png" else None)
    plt.close(fig)
    return path
