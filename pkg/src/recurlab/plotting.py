"""Matplotlib rendering of reports and constructed sets to image files."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def save_measure_figure(report, path) -> Path:
    """Exact measure, Monte Carlo error bars and threshold bounds versus n."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ns = [row.n for row in report.rows]
    exact = [float(row.exact) for row in report.rows]
    ax.plot(ns, exact, "o-", color="tab:blue", label="exact measure")
    mc_ns = [r.n for r in report.rows if r.mc_estimate is not None]
    if mc_ns:
        est = [r.mc_estimate for r in report.rows if r.mc_estimate is not None]
        err = [4 * r.mc_stderr for r in report.rows if r.mc_estimate is not None]
        ax.errorbar(
            mc_ns, est, yerr=err, fmt="s", color="tab:orange",
            capsize=3, label="Monte Carlo (4 sigma)",
        )
    seen = set()
    for row in report.rows:
        for check in row.checks:
            if check.label in seen or not check.bound:
                continue
            seen.add(check.label)
            ax.axhline(
                float(check.bound), linestyle="--", linewidth=0.8,
                color="tab:gray", alpha=0.7,
            )
            ax.annotate(
                f"mu(A)^{check.label}", (ns[-1], float(check.bound)),
                fontsize=7, color="tab:gray", va="bottom", ha="right",
            )
    if all(v > 0 for v in exact):
        ax.set_yscale("log")
    ax.set_xlabel("iterate n")
    ax.set_ylabel("measure")
    ax.set_title(f"{report.system}: {report.system_name}")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_slice_figure(selection, path) -> Path:
    """Slice sizes against the hyperplane sum, with the chosen sum marked."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(7, 4))
    sums = list(range(selection.slots))
    counts = [selection.size_of(s) for s in sums]
    ax.plot(sums, counts, color="tab:blue", linewidth=0.9)
    ax.axvline(selection.s, color="tab:red", linestyle="--", linewidth=1.0)
    ax.annotate(
        f"s = {selection.s}, size {selection.size_of(selection.s)}",
        (selection.s, selection.size_of(selection.s)),
        fontsize=8, color="tab:red",
    )
    ax.set_xlabel("hyperplane sum s")
    ax.set_ylabel("slice size")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_set_figure(point_set, path) -> Path:
    """Scatter rendering of a constructed set (1D rug, 2D or 3D scatter)."""
    path = Path(path)
    if point_set.dim == 3:
        fig = plt.figure(figsize=(6, 6))
        ax = fig.add_subplot(projection="3d")
        xs = [p[0] for p in point_set.points]
        ys = [p[1] for p in point_set.points]
        zs = [p[2] for p in point_set.points]
        ax.scatter(xs, ys, zs, s=8)
        ax.set_xlim(0, point_set.side)
        ax.set_ylim(0, point_set.side)
        ax.set_zlim(0, point_set.side)
    else:
        fig, ax = plt.subplots(figsize=(6, 6 if point_set.dim == 2 else 1.6))
        if point_set.dim == 2:
            ax.scatter(
                [p[0] for p in point_set.points],
                [p[1] for p in point_set.points],
                s=8,
            )
            ax.set_xlim(-0.5, point_set.side - 0.5)
            ax.set_ylim(-0.5, point_set.side - 0.5)
            ax.set_aspect("equal")
        else:
            ax.eventplot([p[0] for p in point_set.points], linewidths=0.8)
            ax.set_xlim(-0.5, point_set.side - 0.5)
            ax.set_yticks([])
    plt.title(f"{point_set.certificate} set, side {point_set.side}, "
              f"{len(point_set)} points")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
