"""Figure rendering and the one-page markdown report.

Presentation only: every plotted number comes from the CSV; the single
computed quantity is the least-squares constant c in the c*ln T and
c*ln^2 T reference overlays, printed in the legend.  Rendering is
deterministic: fixed salts, no timestamps, stable ordering.
"""

from __future__ import annotations

import math
import os
from collections import defaultdict
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "report-plots"

import matplotlib.pyplot as plt
import numpy as np

from .schema import ResultTable, load_results, numeric, series_key

FIGURES = ("regret_vs_T", "mistakes_vs_logT", "tail_vs_threshold", "cover_size_vs_T")


@dataclass
class ReportSpec:
    inputs: list[str]
    out_dir: str
    figures: tuple = FIGURES


def _grouped_means(tables, kind, x_key, y_key, metric=None):
    """{(digest, series): sorted [(x, mean y)]} across the input tables."""
    acc: dict = defaultdict(lambda: defaultdict(list))
    for table in tables:
        for row in table.rows:
            if row.get("kind") != kind:
                continue
            if metric is not None and row.get("metric_name") != metric:
                continue
            x = numeric(row, x_key)
            y = numeric(row, y_key)
            if x is None or y is None:
                continue
            acc[(table.digest, series_key(row))][x].append(y)
    out = {}
    for key, xs in acc.items():
        out[key] = sorted((x, float(np.mean(ys))) for x, ys in xs.items())
    return out


def _fit_constant(xs, ys, transform):
    """Least-squares c for y ~ c * transform(x)."""
    f = np.array([transform(x) for x in xs])
    y = np.asarray(ys)
    denom = float(np.dot(f, f))
    return float(np.dot(f, y) / denom) if denom > 0 else 0.0


def _save(fig, out_dir, name):
    paths = []
    for ext in ("png", "svg"):
        path = os.path.join(out_dir, f"{name}.{ext}")
        fig.savefig(path, metadata={"Date": None} if ext == "svg" else None, dpi=110)
        paths.append(path)
    plt.close(fig)
    return paths


def _plot_placeholder(out_dir, name, message):
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.text(0.5, 0.5, message, ha="center", va="center")
    ax.set_axis_off()
    ax.set_title(name)
    return _save(fig, out_dir, name)


def render_regret_vs_T(tables, out_dir):
    groups = _grouped_means(tables, "game", "T", "regret")
    if not groups:
        return _plot_placeholder(out_dir, "regret_vs_T", "no game rows"), "no data"
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    all_pts = []
    for (digest, series), pts in sorted(groups.items()):
        xs, ys = zip(*pts)
        ax.plot(xs, ys, "o-", label=f"{series} [{digest}]")
        all_pts.extend(pts)
    xs = [p[0] for p in all_pts]
    ys = [p[1] for p in all_pts]
    grid = np.linspace(min(xs), max(xs), 128)
    c1 = _fit_constant(xs, ys, math.log)
    c2 = _fit_constant(xs, ys, lambda v: math.log(v) ** 2)
    ax.plot(grid, c1 * np.log(grid), "--", label=f"{c1:.2f} ln T")
    ax.plot(grid, c2 * np.log(grid) ** 2, ":", label=f"{c2:.3f} ln^2 T")
    ax.set_xscale("log")
    ax.set_xlabel("T")
    ax.set_ylabel("mean regret")
    ax.set_title("regret vs T")
    ax.legend(fontsize=7)
    return _save(fig, out_dir, "regret_vs_T"), f"lnT fit c={c1:.3f}, ln^2 T fit c={c2:.4f}"


def render_mistakes_vs_logT(tables, out_dir):
    groups = _grouped_means(tables, "game", "T", "mistakes")
    extra = _grouped_means(tables, "oracle", "T", "metric_value", metric="sup_behavior_mistakes")
    groups.update(extra)
    if not groups:
        return _plot_placeholder(out_dir, "mistakes_vs_logT", "no mistake rows"), "no data"
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for (digest, series), pts in sorted(groups.items()):
        xs = [math.log(x) for x, _ in pts]
        ys = [y for _, y in pts]
        ax.plot(xs, ys, "s-", label=f"{series} [{digest}]")
    ax.set_xlabel("ln T")
    ax.set_ylabel("mean mistakes")
    ax.set_title("mistakes vs ln T")
    ax.legend(fontsize=7)
    return _save(fig, out_dir, "mistakes_vs_logT"), f"{len(groups)} series"


def render_tail_vs_threshold(tables, out_dir):
    groups = _grouped_means(tables, "oracle", "metric_x", "metric_value", metric="mistake_tail")
    if not groups:
        groups = _grouped_means(tables, "oracle", "metric_x", "metric_value", metric="perm_tail")
    if not groups:
        return _plot_placeholder(out_dir, "tail_vs_threshold", "no tail rows"), "no data"
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for (digest, series), pts in sorted(groups.items()):
        xs, ys = zip(*pts)
        ax.semilogy(xs, [max(y, 1e-6) for y in ys], "d-", label=f"{series} [{digest}]")
    ax.set_xlabel("mistake threshold k")
    ax.set_ylabel("order fraction with mistakes >= k")
    ax.set_title("permutation mistake tail")
    ax.legend(fontsize=7)
    return _save(fig, out_dir, "tail_vs_threshold"), f"{len(groups)} series"


def render_cover_size_vs_T(tables, out_dir):
    groups = _grouped_means(tables, "cover", "T", "cover_size_log2")
    if not groups:
        return _plot_placeholder(out_dir, "cover_size_vs_T", "no cover rows"), "no data"
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for (digest, series), pts in sorted(groups.items()):
        xs, ys = zip(*pts)
        ax.plot(xs, ys, "^-", label=f"{series} [{digest}]")
    ax.set_xscale("log")
    ax.set_xlabel("T")
    ax.set_ylabel("log2 |G|")
    ax.set_title("cover size vs T")
    ax.legend(fontsize=7)
    return _save(fig, out_dir, "cover_size_vs_T"), f"{len(groups)} series"


RENDERERS = {
    "regret_vs_T": render_regret_vs_T,
    "mistakes_vs_logT": render_mistakes_vs_logT,
    "tail_vs_threshold": render_tail_vs_threshold,
    "cover_size_vs_T": render_cover_size_vs_T,
}


def render(spec: ReportSpec) -> str:
    """Render every requested figure plus report.md; returns the report path."""
    tables = [load_results(path) for path in spec.inputs]
    os.makedirs(spec.out_dir, exist_ok=True)
    sections = []
    for name in spec.figures:
        paths, note = RENDERERS[name](tables, spec.out_dir)
        png = next(p for p in paths if p.endswith(".png"))
        sections.append((name, os.path.basename(png), note))
    lines = ["# Sweep report", ""]
    lines.append("Inputs:")
    for table in tables:
        lines.append(f"- `{os.path.basename(table.path)}` digest `{table.digest}` ({len(table.rows)} rows)")
    lines.append("")
    for name, png, note in sections:
        lines.append(f"## {name}")
        lines.append("")
        lines.append(f"![{name}]({png})")
        lines.append("")
        lines.append(f"{note}")
        lines.append("")
    report_path = os.path.join(spec.out_dir, "report.md")
    with open(report_path, "w") as fh:
        fh.write("\n".join(lines))
    return report_path
