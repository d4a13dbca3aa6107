"""Synthetic datasets with known cluster structure.

spherical_caps puts clusters inside small angular caps on the unit sphere
with centers forced far apart, and reports a separation certificate
(max intra-cluster distance, min inter-cluster distance) computed by an
exhaustive pairwise scan, so tests can place eps inside a provable gap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset

CENTER_RETRIES = 10_000


@dataclass
class Certificate:
    """Exhaustive pairwise check over the labeled points (noise excluded)."""

    max_intra: float   # largest cosine distance within any cluster
    min_inter: float   # smallest cosine distance across clusters

    @property
    def gap_mid(self) -> float:
        return 0.5 * (self.max_intra + self.min_inter)

    def has_gap(self) -> bool:
        return self.min_inter > self.max_intra


def _random_unit(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.standard_normal(d)
    return v / np.linalg.norm(v)


def spherical_caps(
    n_per_cluster: int,
    n_clusters: int,
    d: int,
    cap_angle: float,
    noise_count: int = 0,
    seed: int = 0,
) -> tuple[Dataset, Certificate]:
    """Clusters as angular caps of half-angle cap_angle on the unit sphere.

    Centers are rejection-sampled until pairwise angles are >= 3*cap_angle.
    Cluster points lie within cap_angle of their center; noise is uniform on
    the sphere with label -1.
    """
    if n_clusters < 1 or n_per_cluster < 1 or d < 2:
        raise ValueError("need n_clusters >= 1, n_per_cluster >= 1, d >= 2")
    if not 0 <= cap_angle < np.pi / 6:
        raise ValueError(f"cap_angle {cap_angle} out of range [0, pi/6)")
    rng = np.random.default_rng(seed)

    centers = []
    min_angle = 3.0 * cap_angle
    for _ in range(CENTER_RETRIES):
        if len(centers) == n_clusters:
            break
        c = _random_unit(rng, d)
        if all(np.arccos(np.clip(c @ other, -1.0, 1.0)) >= min_angle for other in centers):
            centers.append(c)
    else:
        raise RuntimeError(
            f"could not place {n_clusters} cap centers with pairwise angle "
            f">= {min_angle:.3f} in {CENTER_RETRIES} tries; "
            "reduce n_clusters or cap_angle, or increase d"
        )

    points = np.empty((n_clusters * n_per_cluster + noise_count, d))
    labels = np.empty(points.shape[0], dtype=np.int64)
    row = 0
    for ci, center in enumerate(centers):
        for _ in range(n_per_cluster):
            theta = rng.uniform(0.0, cap_angle)
            u = rng.standard_normal(d)
            u -= (u @ center) * center
            u /= np.linalg.norm(u)
            points[row] = np.cos(theta) * center + np.sin(theta) * u
            labels[row] = ci
            row += 1
    for _ in range(noise_count):
        points[row] = _random_unit(rng, d)
        labels[row] = -1
        row += 1

    cert = _certificate(points, labels)
    return Dataset(points=points, labels=labels), cert


def _certificate(points: np.ndarray, labels: np.ndarray) -> Certificate:
    mask = labels >= 0
    P = points[mask]
    L = labels[mask]
    if P.shape[0] < 2:
        return Certificate(max_intra=0.0, min_inter=np.inf)
    D = 1.0 - P @ P.T
    same = L[:, None] == L[None, :]
    np.fill_diagonal(same, False)
    diff = L[:, None] != L[None, :]
    max_intra = float(D[same].max()) if same.any() else 0.0
    min_inter = float(D[diff].min()) if diff.any() else np.inf
    return Certificate(max_intra=max_intra, min_inter=min_inter)


def gaussian_blobs(
    n_per_cluster: int,
    n_clusters: int,
    d: int,
    center_scale: float = 10.0,
    std: float = 1.0,
    noise_count: int = 0,
    seed: int = 0,
    nonnegative: bool = False,
) -> Dataset:
    """Gaussian clusters in R^d for the L1/L2/chi2/js measures.

    With nonnegative=True all coordinates are shifted to be > 0 so histogram
    measures accept the output.
    """
    if n_clusters < 1 or n_per_cluster < 1 or d < 1:
        raise ValueError("need n_clusters >= 1, n_per_cluster >= 1, d >= 1")
    rng = np.random.default_rng(seed)
    centers = rng.uniform(-center_scale, center_scale, size=(n_clusters, d))
    points = np.empty((n_clusters * n_per_cluster + noise_count, d))
    labels = np.empty(points.shape[0], dtype=np.int64)
    row = 0
    for ci in range(n_clusters):
        block = centers[ci] + std * rng.standard_normal((n_per_cluster, d))
        points[row : row + n_per_cluster] = block
        labels[row : row + n_per_cluster] = ci
        row += n_per_cluster
    if noise_count:
        spread = 3.0 * center_scale
        points[row:] = rng.uniform(-spread, spread, size=(noise_count, d))
        labels[row:] = -1
    if nonnegative:
        low = points.min()
        if low <= 0:
            points += -low + 0.1
    return Dataset(points=points, labels=labels)
