"""Reachability ordering over approximate neighborhoods and eps-cut extraction.

The sweep follows the classic ordering algorithm with a lazy-deletion
priority queue: improved reachabilities are pushed as fresh heap entries
and stale entries are skipped on pop. The recorded reachability of a point
is its key at pop time. Outer-loop seeds are taken in ascending id order so
the dendrogram is reproducible.
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass

import numpy as np

from .cluster import ClusterLabels


@dataclass
class ReachabilityOrdering:
    entries: list            # (point_id, reachability, core_dist), inf allowed
    eps: float
    min_pts: int
    measure: str

    @property
    def n(self) -> int:
        return len(self.entries)

    def reachabilities(self) -> np.ndarray:
        return np.asarray([r for _, r, _ in self.entries])

    def to_json(self) -> str:
        def enc(v: float):
            return None if math.isinf(v) else v

        doc = {
            "params": {"eps": self.eps, "min_pts": self.min_pts, "measure": self.measure},
            "entries": [
                {"order": i, "id": int(p), "reach": enc(r), "core": enc(c)}
                for i, (p, r, c) in enumerate(self.entries)
            ],
        }
        return json.dumps(doc, indent=2)

    @staticmethod
    def from_json(text: str) -> "ReachabilityOrdering":
        doc = json.loads(text)
        params = doc["params"]

        def dec(v) -> float:
            return math.inf if v is None else float(v)

        entries = [(int(e["id"]), dec(e["reach"]), dec(e["core"])) for e in doc["entries"]]
        return ReachabilityOrdering(
            entries=entries,
            eps=float(params["eps"]),
            min_pts=int(params["min_pts"]),
            measure=str(params["measure"]),
        )

    def to_csv(self) -> str:
        def enc(v: float) -> str:
            return "inf" if math.isinf(v) else repr(v)

        lines = ["order,id,reach,core"]
        for i, (p, r, c) in enumerate(self.entries):
            lines.append(f"{i},{int(p)},{enc(r)},{enc(c)}")
        return "\n".join(lines) + "\n"


def core_dist(q: int, core, min_pts: int) -> float:
    """min_pts-th smallest cached neighbor distance; inf for non-core points.

    Cached distances cover the approximate neighborhood only, so this is an
    upper bound on the true core distance, tight when candidates were
    exhaustive.
    """
    if not core.is_core[q]:
        return math.inf
    dists = core.neighbor_dists[q]
    return float(np.partition(dists, min_pts - 1)[min_pts - 1])


def reach_dist(x: int, q: int, core) -> float:
    """max(core_dist(q), dist(x, q)) from the cache; inf if q is non-core."""
    if not core.is_core[q]:
        return math.inf
    ids = core.neighbor_ids[q]
    pos = int(np.searchsorted(ids, x))
    if pos >= ids.shape[0] or ids[pos] != x:
        raise ValueError(f"point {x} is not in the cached neighborhood of {q}")
    return max(core_dist(q, core, core.min_pts), float(core.neighbor_dists[q][pos]))


def run_soptics(data, core, params, measure: str = "cosine") -> ReachabilityOrdering:
    """Sweep all points, expanding from each unprocessed seed in id order.

    Every point appears exactly once; the first point of each sweep keeps
    reachability inf. Only core points propagate reachability to their cached
    neighbors. Ties in the queue break toward the smaller point id.
    """
    n = core.n
    cdist = np.asarray([core_dist(q, core, params.min_pts) for q in range(n)])
    processed = np.zeros(n, dtype=bool)
    reach = np.full(n, math.inf)
    entries: list[tuple[int, float, float]] = []

    def expand(q: int, heap: list) -> None:
        if not core.is_core[q]:
            return
        cq = cdist[q]
        ids = core.neighbor_ids[q]
        dists = core.neighbor_dists[q]
        for x, dxq in zip(ids.tolist(), dists.tolist()):
            if processed[x]:
                continue
            r = max(cq, dxq)
            if r < reach[x]:
                reach[x] = r
                heapq.heappush(heap, (r, x))

    for start in range(n):
        if processed[start]:
            continue
        processed[start] = True
        entries.append((start, math.inf, float(cdist[start])))
        heap: list[tuple[float, int]] = []
        expand(start, heap)
        while heap:
            key, x = heapq.heappop(heap)
            if processed[x]:
                continue
            processed[x] = True
            entries.append((x, key, float(cdist[x])))
            expand(x, heap)

    return ReachabilityOrdering(
        entries=entries, eps=params.eps, min_pts=params.min_pts, measure=measure
    )


def extract_eps_cut(ordering: ReachabilityOrdering, eps_cut: float) -> ClusterLabels:
    """Flat clustering at a threshold: reachability above the cut either
    starts a new cluster (if the point's own core distance clears the cut)
    or marks noise; anything else joins the current cluster."""
    if eps_cut > ordering.eps:
        raise ValueError(
            f"eps_cut {eps_cut} exceeds the ordering's eps {ordering.eps}; "
            "the ordering cannot resolve larger radii"
        )
    n = ordering.n
    labels = np.full(n, -1, dtype=np.int64)
    is_core = np.zeros(n, dtype=bool)
    current = -1
    count = 0
    for point, r, c in ordering.entries:
        is_core[point] = math.isfinite(c)
        if r > eps_cut:
            if c <= eps_cut:
                current = count
                count += 1
                labels[point] = current
            else:
                current = -1
        else:
            labels[point] = current
    return ClusterLabels(labels=labels, num_clusters=count, is_core=is_core)
