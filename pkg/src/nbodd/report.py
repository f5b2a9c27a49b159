"""Rendering: plain-text tables, CSV, and matplotlib figures."""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .bench import HEURISTICS, BenchRecord  # noqa: E402
from .interval import format_interval  # noqa: E402
from .sensitivity import SensitivityReport  # noqa: E402

HEURISTIC_LABELS = {"random": "Random", "desc": "Desc.", "asc": "Asc."}


def _fmt_count(x: int) -> str:
    return str(x) if x < 10**6 else f"{x:.0e}".replace("e+0", "e").replace("e+", "e")


def bench_table(records: Sequence[BenchRecord], heuristics=HEURISTICS) -> str:
    """Table with the columns n, ||E||, Bound, one per heuristic, and time."""
    head = ["n", "||E||", "Bound"] + [HEURISTIC_LABELS.get(h, h) for h in heuristics] + ["time(s)"]
    rows = []
    for r in records:
        rows.append(
            [str(r.n), _fmt_count(r.instances), str(r.bound)]
            + [f"{r.mean_nodes[h]:.1f}" for h in heuristics]
            + [f"{sum(r.seconds.values()):.2f}"]
        )
    widths = [max(len(x) for x in col) for col in zip(head, *rows)]
    lines = ["  ".join(x.rjust(w) for x, w in zip(line, widths)) for line in [head, *rows]]
    return "\n".join(lines) + "\n"


def bench_csv(records: Sequence[BenchRecord], heuristics=HEURISTICS) -> str:
    buf = io.StringIO()
    rows = [r.row(heuristics) for r in records]
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return buf.getvalue()


def plot_bench(records: Sequence[BenchRecord], path: str | Path, heuristics=HEURISTICS) -> Path:
    """Mean node count per heuristic against n, with the size bound, log scale."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ns = [r.n for r in records]
    ax.plot(ns, [r.bound for r in records], "k--", marker="_", ms=12, label="bound")
    markers = {"random": "o", "desc": "v", "asc": "^"}
    for h in heuristics:
        ax.plot(ns, [r.mean_nodes[h] for r in records], marker=markers.get(h, "s"),
                label=HEURISTIC_LABELS.get(h, h))
    ax.set_yscale("log")
    ax.set_xlabel("number of attributes n")
    ax.set_ylabel("nodes (mean over trials)")
    ax.legend(frameon=False)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def sensitivity_text(report: SensitivityReport) -> str:
    lo, hi = report.prior_prob_interval
    lines = [
        f"threshold (log-odds): {report.rho:.6g}",
        f"prior log-odds {report.prior_log_odds:.6g} allowed {format_interval(report.prior_interval)}"
        f"  probability [{lo:.6g}, {hi:.6g})"
        f"  slack -{report.prior_log_odds - report.prior_interval.lo:.6g}"
        f" / +{report.prior_interval.hi - report.prior_log_odds:.6g}",
    ]
    for ws in report.weights:
        flag = "" if ws.realizable else "  (no CPT realizes this box)"
        lines.append(f"attribute {ws.attribute}{flag}")
        for v, w, iv in zip(ws.values, ws.current, ws.intervals):
            lines.append(
                f"  {v}: weight {w:.6g} allowed {format_interval(iv)}"
                f"  slack -{w - iv.lo:.6g} / +{iv.hi - w:.6g}"
            )
    return "\n".join(lines) + "\n"


def sensitivity_csv(report: SensitivityReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["parameter", "value", "current", "lo", "hi"])
    w.writerow(["prior", "", report.prior_log_odds, report.prior_interval.lo,
                report.prior_interval.hi])
    for ws in report.weights:
        for v, cur, iv in zip(ws.values, ws.current, ws.intervals):
            w.writerow([ws.attribute, v, cur, iv.lo, iv.hi])
    return buf.getvalue()


def _clip(x: float, lo: float, hi: float) -> float:
    return min(max(x, lo), hi)


def plot_sensitivity(report: SensitivityReport, path: str | Path) -> Path:
    """One bar per parameter spanning its allowed interval, a dot at its value.

    Infinite ends are drawn to the plot edge.
    """
    labels, spans, current = ["prior"], [report.prior_interval], [report.prior_log_odds]
    for ws in report.weights:
        for v, w, iv in zip(ws.values, ws.current, ws.intervals):
            labels.append(f"{ws.attribute}={v}")
            spans.append(iv)
            current.append(w)
    finite = [x for iv in spans for x in (iv.lo, iv.hi) if math.isfinite(x)] + current
    pad = 1.0 + 0.1 * (max(finite) - min(finite))
    xmin, xmax = min(finite) - pad, max(finite) + pad

    fig, ax = plt.subplots(figsize=(6, 0.35 * len(labels) + 1.2))
    ys = list(range(len(labels)))[::-1]
    for y, iv, c in zip(ys, spans, current):
        a, b = _clip(iv.lo, xmin, xmax), _clip(iv.hi, xmin, xmax)
        ax.barh(y, b - a, left=a, height=0.5, color="0.8")
        ax.plot([c], [y], "ko", ms=4)
    ax.set_yticks(ys)
    ax.set_yticklabels(labels)
    ax.set_xlim(xmin, xmax)
    ax.set_xlabel("log-odds")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
