"""Figure rendering for the report paths: tree view over 2-D data,
decision-graph scatter, sigma-sweep and permutation summaries.

Everything renders through the Agg backend straight to files.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .data_model import ClusterAssignment, InTree

_CMAP = plt.get_cmap("tab20")


def _root_color(root: int):
    return _CMAP((root * 7) % 20)


def save_tree_figure(t: InTree, coords: np.ndarray, path: str | Path,
                     assignment: ClusterAssignment | None = None,
                     crosses: list[tuple[float, float]] | None = None) -> None:
    """Points, directed edges, and root markers over 2-D coordinates;
    cluster colors keyed by root when an assignment is given."""
    coords = np.asarray(coords, dtype=np.float64)
    fig, ax = plt.subplots(figsize=(7, 7))
    starts = t.finite_edge_starts()
    seg_from = coords[starts]
    seg_to = coords[t.target[starts]]
    for (x0, y0), (x1, y1) in zip(seg_from, seg_to):
        ax.annotate("", xy=(x1, y1), xytext=(x0, y0),
                    arrowprops=dict(arrowstyle="->", color="0.55", lw=0.6))
    if assignment is not None:
        colors = [_root_color(int(r)) for r in assignment.root_of]
    else:
        colors = ["0.2"] * t.n
    ax.scatter(coords[:, 0], coords[:, 1], s=14, c=colors, zorder=3)
    roots = t.roots()
    ax.scatter(coords[roots, 0], coords[roots, 1], s=90, facecolors="none",
               edgecolors="black", linewidths=1.4, zorder=4, label="roots")
    if crosses:
        cx = [c[0] for c in crosses]
        cy = [c[1] for c in crosses]
        ax.scatter(cx, cy, marker="x", c="red", s=60, zorder=5, label="selections")
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_title(f"in-tree: {t.n} points, {roots.size} roots")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_decision_graph_figure(dg, path: str | Path,
                               box: tuple[float, float, float, float] | None = None) -> None:
    """Scatter of (|potential|, edge weight); optional selection box drawn
    as (p_min, p_max, w_min, w_max)."""
    xs = [pt.abs_potential for pt in dg if np.isfinite(pt.edge_weight)]
    ys = [pt.edge_weight for pt in dg if np.isfinite(pt.edge_weight)]
    fig, ax = plt.subplots(figsize=(6, 5))
    ax.scatter(xs, ys, s=12, c="tab:blue", alpha=0.7)
    if box is not None:
        p0, p1, w0, w1 = box
        ax.add_patch(plt.Rectangle((p0, w0), p1 - p0, w1 - w0,
                                   fill=False, edgecolor="red", lw=1.5))
    ax.set_xlabel("|potential|")
    ax.set_ylabel("edge weight")
    ax.set_title("decision graph")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_sweep_figure(rows, path: str | Path) -> None:
    """Error rate and cluster count versus sigma, mean with sd bars."""
    sigmas = [r.sigma for r in rows]
    fig, ax1 = plt.subplots(figsize=(7, 5))
    ax1.errorbar(sigmas, [r.mean_error for r in rows],
                 yerr=[r.sd_error for r in rows],
                 color="tab:red", marker="o", capsize=3, label="error rate")
    ax1.set_xscale("log")
    ax1.set_xlabel("sigma")
    ax1.set_ylabel("error rate", color="tab:red")
    ax2 = ax1.twinx()
    ax2.errorbar(sigmas, [r.mean_clusters for r in rows],
                 yerr=[r.sd_clusters for r in rows],
                 color="tab:blue", marker="s", capsize=3, label="clusters")
    ax2.set_ylabel("cluster count", color="tab:blue")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_permutation_figure(stats, path: str | Path) -> None:
    """Per-trial partition disagreement against the benchmark trial."""
    fig, ax = plt.subplots(figsize=(7, 4))
    trials = np.arange(1, stats.disagreements.size + 1)
    ax.bar(trials[1:], stats.disagreements[1:], color="tab:blue", width=0.8)
    ax.axhline(stats.mean, color="tab:red", ls="--", lw=1,
               label=f"mean {stats.mean:.4f} ± {stats.sd:.4f}")
    ax.set_xlabel("trial")
    ax.set_ylabel("disagreement vs benchmark")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_cluster_sizes_figure(a: ClusterAssignment, path: str | Path) -> None:
    """Cluster sizes in decreasing order."""
    sizes = sorted((m.size for m in a.clusters.values()), reverse=True)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(np.arange(1, len(sizes) + 1), sizes, color="tab:green")
    ax.set_xlabel("cluster rank")
    ax.set_ylabel("size")
    ax.set_title(f"{len(sizes)} clusters")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
