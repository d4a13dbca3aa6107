"""Approximate eps-neighborhoods and core-point identification.

Candidates come from the index (union of the top-m points on each of a
query's 2k extreme directions, or a projection-threshold prefix in adaptive
mode); every candidate is then verified against the original-space distance.
Verified pairs are inserted in both directions, so a neighborhood can exceed
the 2km candidate budget of the point that owns it, but every listed
neighbor is within eps for real.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .data import PreparedPoints, canonical_measure
from .parallel import run_chunked

THRESHOLD_FORMS = ("one-minus-eps", "one-minus-eps-sq-over-2")


@dataclass
class NeighborhoodParams:
    eps: float
    min_pts: int
    mode: str = "fixed-m"                          # or "adaptive"
    adaptive_threshold_form: str = "one-minus-eps"
    candidate_cap: int | None = None               # adaptive per-direction cap

    def validate(self) -> None:
        if self.eps <= 0:
            raise ValueError("eps must be > 0")
        if self.min_pts < 1:
            raise ValueError("min_pts must be >= 1")
        if self.mode not in ("fixed-m", "adaptive"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.adaptive_threshold_form not in THRESHOLD_FORMS:
            raise ValueError(
                f"unknown threshold form {self.adaptive_threshold_form!r}; "
                f"expected one of {THRESHOLD_FORMS}"
            )

    def cap(self) -> int:
        return self.candidate_cap if self.candidate_cap is not None else 8 * self.min_pts


@dataclass
class CoreSet:
    """Verified approximate neighborhoods with cached distances.

    neighbor_ids[q] is ascending; neighbor_dists[q] is aligned with it.
    A point is core iff its neighborhood (self excluded) has >= min_pts
    entries.
    """

    neighbor_ids: list = field(repr=False)
    neighbor_dists: list = field(repr=False)
    is_core: np.ndarray = field(repr=False)
    eps: float = 0.0
    min_pts: int = 1

    @property
    def n(self) -> int:
        return self.is_core.shape[0]

    def neighborhood_sizes(self) -> np.ndarray:
        return np.asarray([ids.shape[0] for ids in self.neighbor_ids])


def find_core_points(
    data,
    index,
    params: NeighborhoodParams,
    measure: str,
    threads: int = 1,
) -> CoreSet:
    """Fixed-budget mode: per query, top-m points of its 2k extreme directions."""
    params.validate()
    prepared = _prepare(data, measure)
    m = index.m
    n = prepared.n

    def candidates(q: int) -> np.ndarray:
        # mask dedup: ascending ids without a per-query sort
        mask = np.zeros(n, dtype=bool)
        mask[index.vector_closest_ids[index.point_closest[q], :m].ravel()] = True
        mask[index.vector_furthest_ids[index.point_furthest[q], :m].ravel()] = True
        mask[q] = False
        return np.flatnonzero(mask)

    return _verify_and_collect(prepared, candidates, params, threads)


def find_core_points_adaptive(
    data,
    index,
    params: NeighborhoodParams,
    measure: str,
    threads: int = 1,
    index_eps: float | None = None,
) -> CoreSet:
    """Adaptive mode: per direction, every point whose stored projection
    clears tau*sqrt(2 ln D), capped per direction.

    index_eps is the cosine-space radius matching params.eps (identical for
    cosine/chi2/js; translated through the kernel for l1/l2). tau is
    (1 - eps) or (1 - eps^2/2) per adaptive_threshold_form.
    """
    params.validate()
    eps_c = params.eps if index_eps is None else index_eps
    if params.adaptive_threshold_form == "one-minus-eps":
        tau = 1.0 - eps_c
    else:
        tau = 1.0 - eps_c * eps_c / 2.0
    if tau <= 0:
        raise ValueError(
            f"adaptive threshold tau = {tau:.4f} <= 0 (eps too large for adaptive mode)"
        )
    thr = tau * np.sqrt(2.0 * np.log(index.n_projections))
    cap = min(params.cap(), index.depth)
    prepared = _prepare(data, measure)

    def candidates(q: int) -> np.ndarray:
        picked = []
        for r in index.point_closest[q]:
            vals = index.vector_closest_vals[r]          # descending
            cut = int(np.searchsorted(-vals, -thr, side="right"))
            picked.append(index.vector_closest_ids[r, : min(cut, cap)])
        for r in index.point_furthest[q]:
            vals = index.vector_furthest_vals[r]         # ascending
            cut = int(np.searchsorted(vals, -thr, side="right"))
            picked.append(index.vector_furthest_ids[r, : min(cut, cap)])
        cand = np.unique(np.concatenate(picked)) if picked else np.empty(0, dtype=np.int64)
        return cand[cand != q]

    return _verify_and_collect(prepared, candidates, params, threads)


def core_set_from_exact(neighbor_ids, neighbor_dists, params: NeighborhoodParams) -> CoreSet:
    """Wrap exhaustively computed neighborhoods in the same CoreSet shape."""
    params.validate()
    is_core = np.asarray([ids.shape[0] >= params.min_pts for ids in neighbor_ids])
    return CoreSet(
        neighbor_ids=list(neighbor_ids),
        neighbor_dists=list(neighbor_dists),
        is_core=is_core,
        eps=params.eps,
        min_pts=params.min_pts,
    )


def _prepare(data, measure: str) -> PreparedPoints:
    if isinstance(data, PreparedPoints):
        return data
    points = data.points if hasattr(data, "points") else np.asarray(data)
    return PreparedPoints(points, canonical_measure(measure))


def _verify_and_collect(prepared, candidates, params, threads) -> CoreSet:
    n = prepared.n
    eps = params.eps

    def verify(s, e):
        out = []
        for q in range(s, e):
            cand = candidates(q)
            if cand.size == 0:
                out.append((np.empty(0, dtype=np.int64), np.empty(0)))
                continue
            dists = prepared.distances_from(q, cand)
            keep = dists <= eps
            out.append((cand[keep], dists[keep]))
        return out

    results = run_chunked(verify, n, threads)

    # Bidirectional insert, then per-point dedup. The reverse distance is
    # bitwise-equal (same per-coordinate term order), so keeping the first
    # copy is unambiguous.
    acc_ids = [[] for _ in range(n)]
    acc_dists = [[] for _ in range(n)]
    q = 0
    for block in results:
        for ids, dists in block:
            acc_ids[q].append(ids)
            acc_dists[q].append(dists)
            for x, dxq in zip(ids.tolist(), dists.tolist()):
                acc_ids[x].append(np.asarray([q], dtype=np.int64))
                acc_dists[x].append(np.asarray([dxq]))
            q += 1

    neighbor_ids = []
    neighbor_dists = []
    for q in range(n):
        if acc_ids[q]:
            ids = np.concatenate(acc_ids[q])
            dists = np.concatenate(acc_dists[q])
            ids, first = np.unique(ids, return_index=True)
            dists = dists[first]
        else:
            ids = np.empty(0, dtype=np.int64)
            dists = np.empty(0)
        neighbor_ids.append(ids)
        neighbor_dists.append(dists)

    is_core = np.asarray([ids.shape[0] >= params.min_pts for ids in neighbor_ids])
    return CoreSet(
        neighbor_ids=neighbor_ids,
        neighbor_dists=neighbor_dists,
        is_core=is_core,
        eps=eps,
        min_pts=params.min_pts,
    )
