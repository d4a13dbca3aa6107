"""Regenerate the viewer's golden fixtures from the library.

Each fixture bundles an ordering document with the flat clusterings the
library extracts at a few cuts. The frontend test suite replays the same
cuts and must reproduce the labels exactly.

Usage: python3 tools/make_viewer_fixtures.py
"""

import json
import math
from pathlib import Path

import numpy as np

from sdbscan import exact_optics, extract_eps_cut, spherical_caps
from sdbscan.data import Dataset

OUT = Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures"


def bundle(name, ordering, cuts):
    doc = json.loads(ordering.to_json())
    payload = {
        "name": name,
        "ordering": doc,
        "cuts": [
            {
                "eps_cut": cut,
                "labels": extract_eps_cut(ordering, cut).labels.tolist(),
                "num_clusters": extract_eps_cut(ordering, cut).num_clusters,
            }
            for cut in cuts
        ],
    }
    path = OUT / f"{name}.json"
    path.write_text(json.dumps(payload, indent=2) + "\n")
    print(f"wrote {path} ({ordering.n} entries, {len(cuts)} cuts)")


def main():
    OUT.mkdir(parents=True, exist_ok=True)

    dataset, cert = spherical_caps(100, 2, 16, 0.15, noise_count=10, seed=42)
    assert cert.has_gap()
    eps = cert.gap_mid
    ordering = exact_optics(dataset, eps, 10)
    # the median-reachability cut sits below many intra-cap reachabilities,
    # so the sweep also exercises fragmentation and mid-run noise
    finite = [r for _, r, _ in ordering.entries if math.isfinite(r)]
    bundle("two-cap", ordering,
           [eps, 0.6 * eps, cert.max_intra * 1.02, float(np.median(finite))])

    rng = np.random.default_rng(3)
    scattered = rng.standard_normal((40, 16))
    scattered /= np.linalg.norm(scattered, axis=1, keepdims=True)
    noise = exact_optics(Dataset(points=scattered), 0.05, 10)
    assert all(math.isinf(r) for _, r, _ in noise.entries)
    bundle("all-noise", noise, [0.05, 0.01])

    cap, _ = spherical_caps(80, 1, 16, 0.15, noise_count=0, seed=9)
    single = exact_optics(cap, 0.2, 10)
    bundle("single-cluster", single, [0.2, 0.1])


if __name__ == "__main__":
    main()
