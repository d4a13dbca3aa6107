"""Cluster formation over a CoreSet, plus the projection-based noise labeler."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .parallel import run_chunked
from .projection import estimate_inner_product


@dataclass
class ClusterLabels:
    labels: np.ndarray          # (n,) int64, -1 noise, 0..c-1 clusters
    num_clusters: int
    is_core: np.ndarray

    @property
    def n(self) -> int:
        return self.labels.shape[0]

    def noise_fraction(self) -> float:
        return float((self.labels < 0).sum()) / max(self.n, 1)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = np.arange(n)

    def find(self, a: int) -> int:
        p = self.parent
        root = a
        while p[root] != root:
            root = p[root]
        while p[a] != root:
            p[a], a = root, p[a]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # lower root wins so components stay id-stable
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def form_clusters(core) -> ClusterLabels:
    """Connected components of the core-core graph, then border attachment.

    Border points take the label of the first core point claiming them in
    ascending point-id order. Cluster ids are renumbered so the cluster
    containing the smallest point id is 0, the next 1, and so on.
    """
    n = core.n
    is_core = core.is_core
    uf = _UnionFind(n)
    for q in range(n):
        if not is_core[q]:
            continue
        nbrs = core.neighbor_ids[q]
        for x in nbrs[is_core[nbrs]]:
            uf.union(q, int(x))

    labels = np.full(n, -1, dtype=np.int64)
    for q in range(n):
        if is_core[q]:
            labels[q] = uf.find(q)
    for q in range(n):
        if not is_core[q]:
            continue
        nbrs = core.neighbor_ids[q]
        for x in nbrs[~is_core[nbrs]]:
            if labels[x] < 0:
                labels[x] = labels[q]

    return _renumber(labels, is_core)


def _renumber(labels: np.ndarray, is_core: np.ndarray) -> ClusterLabels:
    out = np.full(labels.shape[0], -1, dtype=np.int64)
    mapping: dict[int, int] = {}
    for q in range(labels.shape[0]):
        if labels[q] < 0:
            continue
        key = int(labels[q])
        if key not in mapping:
            mapping[key] = len(mapping)
        out[q] = mapping[key]
    return ClusterLabels(labels=out, num_clusters=len(mapping), is_core=is_core.copy())


def label_noncore_1nn(
    unit_points: np.ndarray,
    core,
    labels: ClusterLabels,
    index,
    sample_fraction: float = 0.01,
    k: int | None = None,
    seed: int = 0,
    threads: int = 1,
) -> ClusterLabels:
    """Assign every unlabeled point the cluster of its most-aligned sampled core.

    Samples ceil(sample_fraction * n) core points uniformly, recomputes their
    projections (the index does not keep point projections), and scores each
    sampled core against an unlabeled q by the extreme-direction estimator on
    q's stored top-k directions. Pure cosine argmax, no eps filter; points
    already in clusters are never touched. unit_points must be the same
    unit-sphere vectors the index was built on.
    """
    if not 0 < sample_fraction <= 1:
        raise ValueError("sample_fraction must be in (0, 1]")
    n = labels.n
    unlabeled = np.flatnonzero(labels.labels < 0)
    if unlabeled.size == 0:
        return ClusterLabels(labels.labels.copy(), labels.num_clusters, labels.is_core.copy())
    core_ids = np.flatnonzero(core.is_core)
    if core_ids.size == 0:
        return ClusterLabels(labels.labels.copy(), labels.num_clusters, labels.is_core.copy())

    rng = np.random.default_rng(seed)
    size = min(math.ceil(sample_fraction * n), core_ids.size)
    sample = np.sort(rng.choice(core_ids, size=size, replace=False))
    sample_labels = labels.labels[sample]
    proj = index.calibrated_projections(unit_points[sample])   # (size, D)
    k = index.k if k is None else min(k, index.k)

    def score_block(s, e):
        block = unlabeled[s:e]
        picked = np.empty(block.shape[0], dtype=np.int64)
        for i, q in enumerate(block.tolist()):
            close = index.point_closest[q, :k]
            far = index.point_furthest[q, :k]
            scores = proj[:, close].sum(axis=1) - proj[:, far].sum(axis=1)
            picked[i] = sample_labels[int(np.argmax(scores))]   # ties: first = lowest id
        return picked

    parts = run_chunked(score_block, unlabeled.size, threads)
    new_labels = labels.labels.copy()
    new_labels[unlabeled] = np.concatenate(parts)
    return ClusterLabels(new_labels, labels.num_clusters, labels.is_core.copy())


# estimate_inner_product is re-exported so callers scoring single pairs do not
# need to reach into the projection module.
__all__ = ["ClusterLabels", "form_clusters", "label_noncore_1nn", "estimate_inner_product"]
