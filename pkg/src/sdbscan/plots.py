"""Report figures rendered to files next to the delimited outputs."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def reachability_plot(ordering, path, eps_cut: float | None = None) -> None:
    """Bar chart of reachability by order position.

    Infinite reachabilities are drawn as capped bars in a distinct color so
    sweep boundaries stay visible.
    """
    reach = ordering.reachabilities()
    finite = reach[np.isfinite(reach)]
    cap = float(finite.max()) * 1.1 if finite.size else 1.0
    heights = np.where(np.isfinite(reach), reach, cap)
    colors = ["tab:red" if math.isinf(r) else "tab:blue" for r in reach]

    fig, ax = plt.subplots(figsize=(10, 4))
    ax.bar(np.arange(reach.shape[0]), heights, width=1.0, color=colors, linewidth=0)
    if eps_cut is not None:
        ax.axhline(eps_cut, color="black", linestyle="--", linewidth=1, label=f"cut {eps_cut:g}")
        ax.legend()
    ax.set_xlabel("order position")
    ax.set_ylabel("reachability")
    ax.set_title(f"reachability ordering (eps={ordering.eps:g}, min_pts={ordering.min_pts})")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def cluster_sizes_plot(labels, path) -> None:
    """Cluster size histogram with a separate noise bar."""
    lab = np.asarray(labels.labels if hasattr(labels, "labels") else labels)
    ids, counts = np.unique(lab[lab >= 0], return_counts=True)
    noise = int((lab < 0).sum())

    fig, ax = plt.subplots(figsize=(8, 4))
    ax.bar([str(int(i)) for i in ids], counts, color="tab:blue", label="clusters")
    if noise:
        ax.bar(["noise"], [noise], color="tab:gray")
    ax.set_xlabel("cluster")
    ax.set_ylabel("points")
    ax.set_title(f"{ids.size} clusters, {noise} noise points")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
