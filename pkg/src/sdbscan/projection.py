"""Structured random projections and the extreme-projection index.

The projection x -> H D3 H D2 H D1 x composes three rounds of random sign
flips and fast Walsh-Hadamard transforms. With the normalized-Hadamard
convention (1/sqrt(size) per application) the chain is orthogonal, so
project() preserves norms. Index construction rescales the outputs by
sqrt(chain size) so each stored projection has marginal variance ~1 for a
unit input, matching the sqrt(2 ln D) extreme-value statistics the adaptive
threshold and the inner-product estimator rely on.

The index keeps, per point, its k most-aligned and k most-anti-aligned
projection directions, and per direction the top points by projection value
on both ends. Ties always break toward the lower id.
"""

from __future__ import annotations

import numpy as np

from .parallel import run_chunked


def next_pow2(n: int) -> int:
    p = 1
    while p < n:
        p *= 2
    return p


def fwht(a: np.ndarray) -> np.ndarray:
    """In-place unnormalized fast Walsh-Hadamard transform over the last axis."""
    n = a.shape[-1]
    if n & (n - 1) or n < 1:
        raise ValueError(f"transform length {n} is not a power of 2")
    flat = a.reshape(-1, n)
    h = 1
    while h < n:
        b = flat.reshape(-1, n // (2 * h), 2, h)
        top = b[:, :, 0, :].copy()
        b[:, :, 0, :] = top + b[:, :, 1, :]
        b[:, :, 1, :] = top - b[:, :, 1, :]
        h *= 2
    return a


class SpinnerTransform:
    """Orthogonal D-output projection via sign flips + Hadamard transforms.

    Inputs of dimension d are zero-padded to the chain size
    max(D, next_pow2(d)); outputs are truncated to the first D coordinates.
    When the chain size equals D the map is exactly orthogonal.
    """

    def __init__(self, n_projections: int, input_dim: int, seed: int = 0):
        if n_projections < 2 or n_projections & (n_projections - 1):
            raise ValueError(f"n_projections must be a power of 2 >= 2, got {n_projections}")
        if input_dim < 1:
            raise ValueError("input_dim must be >= 1")
        self.n_projections = n_projections
        self.input_dim = input_dim
        self.chain = max(n_projections, next_pow2(input_dim))
        self.seed = seed
        rng = np.random.default_rng(seed)
        self.signs = rng.integers(0, 2, size=(3, self.chain)).astype(np.float64) * 2.0 - 1.0
        # Three normalized Hadamard applications on one unnormalized FWHT chain.
        self._scale = float(self.chain) ** -1.5

    def project(self, x: np.ndarray) -> np.ndarray:
        """Projection values, shape (D,) for one point or (n, D) for a batch."""
        x = np.asarray(x, dtype=np.float64)
        single = x.ndim == 1
        X = x[None, :] if single else x
        if X.shape[1] != self.input_dim:
            raise ValueError(f"expected dimension {self.input_dim}, got {X.shape[1]}")
        buf = np.zeros((X.shape[0], self.chain))
        buf[:, : self.input_dim] = X
        for s in self.signs:
            buf *= s
            fwht(buf)
        buf *= self._scale
        out = buf[:, : self.n_projections]
        return out[0] if single else out


def top_ids(vals: np.ndarray, m: int, largest: bool) -> np.ndarray:
    """Ids of the m largest (or smallest) values, ties to the lower id.

    Result is ordered by value (descending for largest, ascending for
    smallest) with stable id order inside tie groups.
    """
    n = vals.shape[0]
    key = -vals if largest else vals
    if m >= n:
        return np.argsort(key, kind="stable")
    part = np.argpartition(key, m - 1)[:m]
    boundary = key[part].max()
    cand = np.flatnonzero(key <= boundary)   # ascending ids, includes full tie group
    return cand[np.argsort(key[cand], kind="stable")][:m]


class CeosIndex:
    """Extreme-projection lookup tables over a set of unit vectors.

    point_closest/point_furthest: (n, k) direction ids per point.
    vector_closest_*/vector_furthest_*: (D, depth) point ids and projection
    values per direction; closest sorted by value descending, furthest
    ascending. depth >= m so adaptive candidate generation can look past
    the fixed-m budget.
    """

    def __init__(self, transform, k, m, depth, point_closest, point_furthest,
                 vector_closest_ids, vector_closest_vals,
                 vector_furthest_ids, vector_furthest_vals):
        self.transform = transform
        self.k = k
        self.m = m
        self.depth = depth
        self.point_closest = point_closest
        self.point_furthest = point_furthest
        self.vector_closest_ids = vector_closest_ids
        self.vector_closest_vals = vector_closest_vals
        self.vector_furthest_ids = vector_furthest_ids
        self.vector_furthest_vals = vector_furthest_vals

    @property
    def n_projections(self) -> int:
        return self.transform.n_projections

    @property
    def n_points(self) -> int:
        return self.point_closest.shape[0]

    def calibrated_projections(self, X: np.ndarray) -> np.ndarray:
        """Projections scaled to unit marginal variance (as stored at build)."""
        return self.transform.project(X) * np.sqrt(self.transform.chain)


def build_index(
    data: np.ndarray,
    n_projections: int,
    k: int,
    m: int,
    seed: int = 0,
    threads: int = 1,
    depth: int | None = None,
) -> CeosIndex:
    """Project all points and build the per-point / per-direction top lists.

    data must already be unit vectors (normalized or embedded). depth widens
    the stored per-direction lists beyond m for adaptive candidate
    generation; the fixed-m path reads only the first m entries.
    """
    data = np.asarray(data, dtype=np.float64)
    if data.ndim != 2:
        raise ValueError("data must be a 2-d array of points")
    n, d = data.shape
    if n < 1:
        raise ValueError("need at least one point")
    if not 1 <= k <= n_projections // 2:
        raise ValueError(f"k must satisfy 1 <= k <= D/2, got k={k}, D={n_projections}")
    if m < 1:
        raise ValueError("m must be >= 1")
    depth = max(m, depth or m)
    transform = SpinnerTransform(n_projections, d, seed)
    scale = np.sqrt(transform.chain)

    blocks = run_chunked(lambda s, e: transform.project(data[s:e]) * scale, n, threads)
    P = np.vstack(blocks)   # (n, D) calibrated projection values

    def point_tops(s, e):
        closest = np.empty((e - s, k), dtype=np.int64)
        furthest = np.empty((e - s, k), dtype=np.int64)
        for i in range(s, e):
            closest[i - s] = top_ids(P[i], k, largest=True)
            furthest[i - s] = top_ids(P[i], k, largest=False)
        return closest, furthest

    parts = run_chunked(point_tops, n, threads)
    point_closest = np.vstack([p[0] for p in parts])
    point_furthest = np.vstack([p[1] for p in parts])

    eff = min(depth, n)
    D = n_projections

    def vector_tops(s, e):
        cols = np.ascontiguousarray(P[:, s:e].T)   # (e-s, n)
        c_ids = np.empty((e - s, eff), dtype=np.int64)
        f_ids = np.empty((e - s, eff), dtype=np.int64)
        c_vals = np.empty((e - s, eff))
        f_vals = np.empty((e - s, eff))
        for j in range(e - s):
            ci = top_ids(cols[j], eff, largest=True)
            fi = top_ids(cols[j], eff, largest=False)
            c_ids[j], c_vals[j] = ci, cols[j][ci]
            f_ids[j], f_vals[j] = fi, cols[j][fi]
        return c_ids, c_vals, f_ids, f_vals

    parts = run_chunked(vector_tops, D, threads, chunk=64)
    return CeosIndex(
        transform=transform,
        k=k,
        m=min(m, n),
        depth=eff,
        point_closest=point_closest,
        point_furthest=point_furthest,
        vector_closest_ids=np.vstack([p[0] for p in parts]),
        vector_closest_vals=np.vstack([p[1] for p in parts]),
        vector_furthest_ids=np.vstack([p[2] for p in parts]),
        vector_furthest_vals=np.vstack([p[3] for p in parts]),
    )


def estimate_inner_product(closest_proj: np.ndarray, furthest_proj: np.ndarray) -> float:
    """Alignment score from a point's projections at a query's extreme directions.

    Sum of projections at the query's closest directions minus the sum at its
    furthest ones. Monotone in the true inner product up to noise; only ever
    compared via argmax, never read as a calibrated value.
    """
    return float(np.sum(closest_proj) - np.sum(furthest_proj))
