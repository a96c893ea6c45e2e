"""Figures for scan reports, sieve runs and the random model (Agg backend, written to files)."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

_MARKERS = ("o", "s", "^", "D")


def _finish(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_scan(rows, path, eps=None) -> Path:
    """Expected sizes n_j against the largest prime used, one series per j.

    ``rows`` are the dicts from ``ScanReport.csv_rows``; blank entries are skipped.
    """
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for j in range(4):
        xs, ys = [], []
        for r in rows:
            v = r.get(f"n_{j}", "")
            if v != "" and float(v) > 0:
                xs.append(int(r["prime"]))
                ys.append(float(v))
        if xs:
            ax.plot(xs, ys, marker=_MARKERS[j], ms=3, lw=1, label=f"$n_{j}$")
    if eps is not None:
        ax.axhline(float(eps), color="grey", ls="--", lw=0.8, label=r"$\varepsilon$")
    ax.set_yscale("log")
    ax.set_xlabel("largest prime in S")
    ax.set_ylabel("expected size")
    if ax.get_legend_handles_labels()[0]:
        ax.legend(frameon=False, fontsize=8)
    return _finish(fig, path)


def plot_stages(history, path) -> Path:
    """|A| after each lifting stage, labelled by the prime used."""
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    sizes = [max(h["size"], 0) for h in history]
    ax.bar(range(len(sizes)), [s if s else 0.5 for s in sizes], color="tab:blue")
    ax.set_xticks(range(len(sizes)))
    ax.set_xticklabels(["start" if h["q"] is None else str(h["q"]) for h in history], fontsize=8)
    ax.set_yscale("log")
    ax.set_xlabel("lifting prime")
    ax.set_ylabel("#A")
    return _finish(fig, path)


def plot_model(samples, path) -> Path:
    """p times the miss frequency for each sampled p, against 6/pi^2."""
    fig, ax = plt.subplots(figsize=(6.0, 3.8))
    ps = [s["p"] for s in samples]
    ys = [s["scaled"] for s in samples]
    err = [s["p"] * math.sqrt(max(s["frequency"] * (1 - s["frequency"]), 0) / s["trials"]) for s in samples]
    ax.errorbar(ps, ys, yerr=err, fmt="o", ms=4, capsize=2, label="simulated")
    ax.axhline(6 / math.pi**2, color="grey", ls="--", lw=0.8, label=r"$6/\pi^2$")
    ax.set_xlabel("p")
    ax.set_ylabel("p * Pr[miss]")
    ax.legend(frameon=False, fontsize=8)
    return _finish(fig, path)
