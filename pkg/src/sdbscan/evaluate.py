"""Clustering quality metrics and run reports."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np


def nmi(a, b) -> float:
    """Normalized mutual information, I(A;B) / ((H(A)+H(B))/2), natural logs.

    Noise (-1) counts as its own label on both sides. Returns 0.0 when the
    normalizer is zero (both sides constant).
    """
    a = np.asarray(a, dtype=np.int64).ravel()
    b = np.asarray(b, dtype=np.int64).ravel()
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"label vectors differ in length: {a.shape[0]} vs {b.shape[0]}")
    n = a.shape[0]
    if n == 0:
        raise ValueError("empty label vectors")

    ua, ia = np.unique(a, return_inverse=True)
    ub, ib = np.unique(b, return_inverse=True)
    table = np.zeros((ua.size, ub.size))
    np.add.at(table, (ia, ib), 1.0)
    pxy = table / n
    px = pxy.sum(axis=1)
    py = pxy.sum(axis=0)

    nz = pxy > 0
    mi = float((pxy[nz] * np.log(pxy[nz] / np.outer(px, py)[nz])).sum())
    hx = float(-(px[px > 0] * np.log(px[px > 0])).sum())
    hy = float(-(py[py > 0] * np.log(py[py > 0])).sum())
    denom = 0.5 * (hx + hy)
    if denom <= 0.0:
        return 0.0
    # Clip float drift so identical labelings give exactly 1.0.
    return float(min(1.0, max(0.0, mi / denom)))


@dataclass
class RunReport:
    """Per-run summary: parameters, phase wall-times, quality if known."""

    params: dict = field(default_factory=dict)
    num_clusters: int = 0
    noise_fraction: float = 0.0
    timings: dict = field(default_factory=dict)   # phase name -> seconds
    nmi: float | None = None

    def to_dict(self) -> dict:
        out = {
            "params": self.params,
            "num_clusters": self.num_clusters,
            "noise_fraction": self.noise_fraction,
            "timings": {k: round(v, 6) for k, v in self.timings.items()},
        }
        if self.nmi is not None:
            out["nmi"] = self.nmi
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def summarize_labels(labels: np.ndarray) -> tuple[int, float]:
    """(number of clusters, noise fraction) for a label vector."""
    labels = np.asarray(labels)
    clusters = np.unique(labels[labels >= 0])
    noise = float((labels < 0).sum()) / max(labels.size, 1)
    return int(clusters.size), noise
