"""Rendering: text tables, projection CSV exports, and figures.

The quality table groups per-class metric rows under one block per model
family; the transfer table lists the baseline row followed by TRTS and
TSTR rows per family. Figures are rendered headless.
"""

import csv
from pathlib import Path

import numpy as np

from ..metrics import MetricReport, PcaProjection

PER_CLASS_METRICS = ("stat_distance", "mmd", "privacy", "disc_score")
TRANSFER_METRICS = ("accuracy", "recall", "f1")


def _pm(pair: tuple[float, float]) -> str:
    mean, std = pair
    return f"{mean:7.3f} +/- {std:5.3f}"


def render_tables(
    report: MetricReport,
    synth_counts: dict[str, int],
    families=("timegan", "dgan"),
    classes=(),
) -> str:
    lines: list[str] = []
    lines.append(
        f"Synthetic data quality per gesture class (mean +/- std over {report.n_runs} runs)"
    )
    header = f"{'class':<10}" + "".join(f"{m:>22}" for m in PER_CLASS_METRICS)
    lines.append("=" * len(header))
    for family in sorted(families):
        lines.append(f"-- {family} --")
        lines.append(header)
        for cls in classes:
            key = f"{family}/{cls}"
            metrics = report.per_class.get(key, {})
            row = f"{cls:<10}"
            for m in PER_CLASS_METRICS:
                row += f"{_pm(metrics[m]):>22}" if m in metrics else f"{'-':>22}"
            lines.append(row)
    lines.append("")

    lines.append(
        f"Transfer experiments (mean +/- std over {report.n_runs} runs)"
    )
    header2 = f"{'eval':<10}{'model':<10}" + "".join(f"{m:>22}" for m in TRANSFER_METRICS)
    lines.append("=" * len(header2))
    lines.append(header2)

    def transfer_row(tag: str, model: str, stats: dict) -> str:
        row = f"{tag:<10}{model:<10}"
        for m in TRANSFER_METRICS:
            row += f"{_pm(stats[m]):>22}" if m in stats else f"{'-':>22}"
        return row

    if "baseline" in report.pooled:
        lines.append(transfer_row("base", "-", report.pooled["baseline"]))
    for exp in ("trts", "tstr"):
        for family in sorted(families):
            key = f"{exp}/{family}"
            if key in report.pooled:
                lines.append(transfer_row(exp, family, report.pooled[key]))
    lines.append("")

    if synth_counts:
        counts = ", ".join(f"{k}={v}" for k, v in sorted(synth_counts.items()))
        lines.append(f"synthetic windows per class: {counts}")
    return "\n".join(lines) + "\n"


def write_pca_csv(projection: PcaProjection, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["set", "pc1", "pc2"])
        for row in projection.real_points:
            writer.writerow(["real", repr(float(row[0])), repr(float(row[1]))])
        for row in projection.synth_points:
            writer.writerow(["synthetic", repr(float(row[0])), repr(float(row[1]))])
    return path


def read_pca_csv(path: str | Path) -> dict[str, np.ndarray]:
    points: dict[str, list[list[float]]] = {"real": [], "synthetic": []}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["set", "pc1", "pc2"]:
            raise ValueError(f"{path}: unexpected header {header}")
        for row in reader:
            points[row[0]].append([float(row[1]), float(row[2])])
    return {k: np.asarray(v, dtype=np.float64).reshape(-1, 2) for k, v in points.items()}


def _use_agg():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def plot_pca(csv_path: str | Path, out_png: str | Path, title: str = "") -> Path:
    plt = _use_agg()
    points = read_pca_csv(csv_path)
    fig, ax = plt.subplots(figsize=(5, 4))
    for name, marker, color in (("real", "o", "tab:blue"), ("synthetic", "x", "tab:orange")):
        pts = points[name]
        if len(pts):
            ax.scatter(pts[:, 0], pts[:, 1], s=12, marker=marker, color=color,
                       label=name, alpha=0.7)
    ax.set_xlabel("pc1")
    ax.set_ylabel("pc2")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    out_png = Path(out_png)
    out_png.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_png, dpi=120)
    plt.close(fig)
    return out_png


def plot_history(history_csv: str | Path, out_png: str | Path, title: str = "") -> Path:
    import pandas as pd

    plt = _use_agg()
    frame = pd.read_csv(history_csv)
    fig, ax = plt.subplots(figsize=(6, 4))
    for col in frame.columns:
        if col == "epoch":
            continue
        ax.plot(frame["epoch"], frame[col], label=col)
    ax.set_xlabel("epoch")
    ax.set_ylabel("loss")
    ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    out_png = Path(out_png)
    out_png.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_png, dpi=120)
    plt.close(fig)
    return out_png
