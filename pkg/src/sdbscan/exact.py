"""Brute-force exact DBSCAN and reachability orderings.

These share the cluster/optics code paths with the approximate pipeline and
differ only in where neighborhoods come from (exhaustive O(n^2) scan), so
tests comparing the two isolate the approximation as the only difference.
"""

from __future__ import annotations

import numpy as np

from .cluster import ClusterLabels, form_clusters
from .data import PreparedPoints, canonical_measure
from .neighbors import CoreSet, NeighborhoodParams, core_set_from_exact
from .optics import ReachabilityOrdering, run_soptics
from .parallel import run_chunked


class ExactNeighborhoods:
    """Full eps-neighborhoods (self excluded) with distances, per point."""

    def __init__(self, neighbor_ids, neighbor_dists, eps: float, measure: str):
        self.neighbor_ids = neighbor_ids
        self.neighbor_dists = neighbor_dists
        self.eps = eps
        self.measure = measure

    @property
    def n(self) -> int:
        return len(self.neighbor_ids)

    def as_core_set(self, min_pts: int) -> CoreSet:
        params = NeighborhoodParams(eps=self.eps, min_pts=min_pts)
        return core_set_from_exact(self.neighbor_ids, self.neighbor_dists, params)


def exact_range(data, eps: float, measure: str = "cosine", threads: int = 1) -> ExactNeighborhoods:
    """Exhaustive pairwise scan; the boundary dist == eps counts as inside."""
    if eps < 0:
        raise ValueError("eps must be >= 0")
    measure = canonical_measure(measure)
    points = data.points if hasattr(data, "points") else np.asarray(data)
    prepared = PreparedPoints(points, measure)
    n = prepared.n

    def scan(s, e):
        rows = prepared.distance_block(np.arange(s, e))
        out = []
        for i, q in enumerate(range(s, e)):
            mask = rows[i] <= eps
            mask[q] = False
            ids = np.flatnonzero(mask)
            out.append((ids, rows[i][ids]))
        return out

    blocks = run_chunked(scan, n, threads)
    neighbor_ids = []
    neighbor_dists = []
    for block in blocks:
        for ids, dists in block:
            neighbor_ids.append(ids)
            neighbor_dists.append(dists)
    return ExactNeighborhoods(neighbor_ids, neighbor_dists, eps, measure)


def exact_dbscan(data, eps: float, min_pts: int, measure: str = "cosine", threads: int = 1) -> ClusterLabels:
    return form_clusters(exact_range(data, eps, measure, threads).as_core_set(min_pts))


def exact_optics(
    data, eps: float, min_pts: int, measure: str = "cosine", threads: int = 1
) -> ReachabilityOrdering:
    core = exact_range(data, eps, measure, threads).as_core_set(min_pts)
    params = NeighborhoodParams(eps=eps, min_pts=min_pts)
    return run_soptics(data, core, params, measure=measure)
