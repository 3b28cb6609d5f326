"""CSV and figure output for census results.

Every census report consists of one histogram CSV per curve (the three
uncovered-set variants plus Pareto), one ratio-CDF CSV per variant, and two
matplotlib figures rendered next to the CSV files.
"""

from __future__ import annotations

import csv
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .covering import VARIANTS
from .experiments import CURVES, Census

__all__ = [
    "write_histogram_csv",
    "write_cdf_csv",
    "render_histogram_figure",
    "render_cdf_figure",
    "write_report",
]

CURVE_TITLES = {
    "mckelvey": "McKelvey",
    "bordes": "Bordes",
    "gillies": "Gillies",
    "po": "Pareto",
}


def write_histogram_csv(census: Census, curve: str, path):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["cardinality", "count", "percentage"])
        for size, count, pct in census.histogram_rows(curve):
            w.writerow([size, count, pct])


def write_cdf_csv(census: Census, variant: str, path):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["ratio_percent", "cumulative_percentage"])
        for pct, cum in census.cdf_rows(variant):
            w.writerow([pct, cum])


def render_histogram_figure(census: Census, path):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for curve in CURVES:
        rows = census.histogram_rows(curve)
        xs = [r[0] for r in rows]
        ys = [float(r[2]) for r in rows]
        ax.plot(xs, ys, marker=".", markersize=3, linewidth=1,
                label=CURVE_TITLES[curve])
    ax.set_xlabel("Cardinality")
    ax.set_ylabel("Frequency (as percentage)")
    ax.set_title(f"Set size distributions over {census.profiles} profiles (n={census.n})")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_cdf_figure(census: Census, path):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for variant in VARIANTS:
        rows = census.cdf_rows(variant)
        xs = [r[0] for r in rows]
        ys = [float(r[1]) for r in rows]
        ax.plot(xs, ys, linewidth=1.2, label=CURVE_TITLES[variant])
    ax.set_xlabel("Uncovered-to-Pareto size ratio (percent)")
    ax.set_ylabel("Cumulative percentage of profiles")
    ax.set_title(f"Ratio distribution over {census.profiles} profiles (n={census.n})")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_report(census: Census, outdir, stem="census") -> list:
    """Write all CSVs and both figures into ``outdir``; returns the paths."""
    os.makedirs(outdir, exist_ok=True)
    paths = []
    for curve in CURVES:
        p = os.path.join(outdir, f"{stem}_sizes_{curve}.csv")
        write_histogram_csv(census, curve, p)
        paths.append(p)
    for variant in VARIANTS:
        p = os.path.join(outdir, f"{stem}_ratio_cdf_{variant}.csv")
        write_cdf_csv(census, variant, p)
        paths.append(p)
    p = os.path.join(outdir, f"{stem}_sizes.png")
    render_histogram_figure(census, p)
    paths.append(p)
    p = os.path.join(outdir, f"{stem}_ratio_cdf.png")
    render_cdf_figure(census, p)
    paths.append(p)
    return paths
