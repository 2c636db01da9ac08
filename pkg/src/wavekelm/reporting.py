"""Report rendering: fixed-width tables, timing CSV, and figures.

Accuracy is printed in percent with two decimals, the standard deviation
carries a +/- prefix, p-values print plainly at two decimals when at
least 0.01 and in scientific form below that (the best row is 1.00 by
convention).  Timing rows are written as a (training_size, algo,
mean_time) CSV so runs at different training sizes can be concatenated
into one timing curve, and the same rows can be rendered to a figure.
"""

from __future__ import annotations

import csv
import os
import tempfile
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .admissibility import FourierCheckReport
from .errors import ConfigError
from .evaluation import BenchmarkReport

__all__ = [
    "format_p_value",
    "emit_report",
    "timing_rows",
    "write_timing_csv",
    "read_timing_csv",
    "render_timing_figure",
    "render_transform_figure",
    "write_text_atomic",
]

ALGO_TITLES = {
    "mhw": "MHW-KELM",
    "gauss": "Gauss-KELM",
    "poly": "Poly-KELM",
    "elm": "Original ELM",
}


def format_p_value(p: float, best: bool = False) -> str:
    """Table convention: best row prints 1.00, small values scientific."""
    if best:
        return "1.00"
    if p >= 0.01:
        return f"{p:.2f}"
    return f"{p:.2e}"


def emit_report(report: BenchmarkReport, include_timing: bool = True) -> str:
    """Render a benchmark report as a fixed-width text table."""
    if not report.rows:
        raise ConfigError("cannot render a report with no rows")
    lines = [
        f"Benchmark: {report.dataset} "
        f"(train {report.train_count}, test {report.test_count}, {report.n_classes} classes), "
        f"{report.n_trials} trials, base seed {report.base_seed}",
        "",
    ]
    header = f"{'Algorithm':<14}{'Mean':>8}{'Std':>9}{'p value':>10}"
    if include_timing:
        header += f"{'Time (s)':>10}"
    lines.append(header)
    lines.append("-" * len(header))
    for row in report.rows:
        name = ALGO_TITLES.get(row.algo.value, row.algo.value)
        text = (
            f"{name:<14}"
            f"{row.mean_accuracy:>8.2f}"
            f"{'±' + format(row.std, '.2f'):>9}"
            f"{format_p_value(row.p_value, best=row.algo is report.best_algo):>10}"
        )
        if include_timing:
            text += f"{row.mean_time:>10.3f}"
        if row.n_failed:
            text += f"  [{row.n_failed} failed trial(s) excluded]"
        lines.append(text)
    best_name = ALGO_TITLES.get(report.best_algo.value, report.best_algo.value)
    lines.append("")
    lines.append(f"Best mean accuracy: {best_name}")
    return "\n".join(lines) + "\n"


def timing_rows(report: BenchmarkReport) -> list[tuple[int, str, float]]:
    """(training_size, algo, mean_time) rows for the timing curve."""
    return [(report.train_count, row.algo.value, row.mean_time) for row in report.rows]


def write_timing_csv(rows, path) -> None:
    text_lines = ["training_size,algo,mean_time"]
    for size, algo, mean_time in rows:
        text_lines.append(f"{size},{algo},{mean_time:.6f}")
    write_text_atomic(path, "\n".join(text_lines) + "\n")


def read_timing_csv(path) -> list[tuple[int, str, float]]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        return [(int(r["training_size"]), r["algo"], float(r["mean_time"])) for r in reader]


def render_timing_figure(rows, path) -> None:
    """Training-time curve: one line per algorithm over training sizes."""
    if not rows:
        raise ConfigError("no timing rows to plot")
    by_algo: dict[str, list[tuple[int, float]]] = {}
    for size, algo, mean_time in rows:
        by_algo.setdefault(algo, []).append((size, mean_time))
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for algo, pts in by_algo.items():
        pts.sort()
        ax.plot(
            [p[0] for p in pts],
            [p[1] for p in pts],
            marker="o",
            label=ALGO_TITLES.get(algo, algo),
        )
    ax.set_xlabel("training samples")
    ax.set_ylabel("mean training time (s)")
    ax.set_title("Training time by algorithm")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_transform_figure(report: FourierCheckReport, path) -> None:
    """Numeric transform vs. the ratio-scaled closed form over omega."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(report.omega_grid, report.numeric_ft, label="numeric transform")
    if report.proportionality_ratio == report.proportionality_ratio:  # not NaN
        ax.plot(
            report.omega_grid,
            report.proportionality_ratio * report.closed_form,
            "--",
            label=f"closed form × {report.proportionality_ratio:.4g}",
        )
    ax.axhline(0.0, color="k", lw=0.6)
    ax.set_xlabel("omega")
    ax.set_ylabel("transform value")
    ax.set_title(f"Fourier check: {report.kernel} — {report.verdict.value}")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_text_atomic(path, text: str) -> None:
    """Write via a temp file and rename, so failures leave no partial file."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
