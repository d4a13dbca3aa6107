"""Command-line entry point.

Subcommands: sdbscan, soptics (alias: optics), exact-dbscan, exact-optics,
extract, synth, eval. Approximate runs embed non-cosine data, build the
projection index, verify candidate neighborhoods against original-space
distances, then cluster or sweep. Reports go to stdout or --report as JSON;
--plot renders figures next to the --out file.

Seeds: the embedding uses --seed, the index --seed+1, the noise labeler
--seed+2, so one seed pins the whole run. Outputs are byte-identical across
--threads values.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from .cluster import form_clusters, label_noncore_1nn
from .data import MEASURES, Dataset, canonical_measure, load_dataset, normalize_to_sphere
from .embed import (
    DEFAULT_SAMPLING_INTERVAL,
    EmbeddingConfig,
    build_feature_map,
    embedded_epsilon,
    homogeneous_d_prime,
)
from .evaluate import RunReport, nmi, summarize_labels
from .exact import exact_optics, exact_range
from .neighbors import THRESHOLD_FORMS, NeighborhoodParams, find_core_points, find_core_points_adaptive
from .optics import ReachabilityOrdering, extract_eps_cut, run_soptics
from .parallel import default_threads
from .projection import build_index
from . import plots
from .synth import gaussian_blobs, spherical_caps

EXACT_GUARD = 100_000


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sdbscan",
        description="Density-based clustering accelerated by random projections.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("sdbscan", help="approximate DBSCAN")
    _data_args(p)
    _density_args(p)
    _index_args(p)
    p.add_argument("--cluster-noise", action="store_true",
                   help="assign leftover noise points to clusters by projection similarity")
    p.add_argument("--sample-fraction", type=float, default=0.01,
                   help="core-point sample fraction for --cluster-noise")
    _output_args(p)
    p.set_defaults(func=cmd_sdbscan)

    p = sub.add_parser("soptics", aliases=["optics"], help="approximate reachability ordering")
    _data_args(p)
    _density_args(p)
    _index_args(p)
    _output_args(p)
    p.set_defaults(func=cmd_soptics)

    p = sub.add_parser("exact-dbscan", help="brute-force DBSCAN (quadratic)")
    _data_args(p)
    _density_args(p)
    p.add_argument("--allow-large", action="store_true",
                   help=f"permit exact runs above {EXACT_GUARD} points")
    _output_args(p)
    p.set_defaults(func=cmd_exact_dbscan)

    p = sub.add_parser("exact-optics", help="brute-force reachability ordering (quadratic)")
    _data_args(p)
    _density_args(p)
    p.add_argument("--allow-large", action="store_true",
                   help=f"permit exact runs above {EXACT_GUARD} points")
    _output_args(p)
    p.set_defaults(func=cmd_exact_optics)

    p = sub.add_parser("extract", help="flat clustering from a saved ordering")
    p.add_argument("--ordering", required=True, help="ordering JSON from soptics/exact-optics")
    p.add_argument("--eps-cut", type=float, required=True)
    _output_args(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("synth", help="generate synthetic data")
    p.add_argument("--kind", choices=["caps", "blobs"], default="caps")
    p.add_argument("--clusters", type=int, default=3)
    p.add_argument("--per-cluster", type=int, default=100)
    p.add_argument("--dim", type=int, default=16)
    p.add_argument("--cap-angle", type=float, default=0.15, help="caps only, radians")
    p.add_argument("--center-scale", type=float, default=10.0, help="blobs only")
    p.add_argument("--std", type=float, default=1.0, help="blobs only")
    p.add_argument("--nonnegative", action="store_true", help="blobs only: shift positive")
    p.add_argument("--noise", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="dense CSV, label in the last column")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("eval", help="NMI between two label files")
    p.add_argument("--pred", required=True, help="labels CSV (point_id,cluster_id)")
    p.add_argument("--truth", required=True, help="labels CSV (point_id,cluster_id)")
    p.set_defaults(func=cmd_eval)

    return parser


def _data_args(p) -> None:
    p.add_argument("--data", required=True, help="dataset file")
    p.add_argument("--format", choices=["dense-csv", "sparse-libsvm"], default="dense-csv")
    p.add_argument("--label-column", type=int, default=None,
                   help="ground-truth column in dense CSV; enables NMI in the report")
    p.add_argument("--dist", choices=list(MEASURES), default="cosine")


def _density_args(p) -> None:
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--min-pts", type=int, default=50)
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: all cores); outputs do not depend on it")


def _index_args(p) -> None:
    p.add_argument("--projections", type=int, default=1024, help="number of projection directions D")
    p.add_argument("--top-vectors", type=int, default=5, help="extreme directions kept per point (k)")
    p.add_argument("--top-points", type=int, default=None,
                   help="points kept per direction (m, default min-pts)")
    p.add_argument("--kernel-features", type=int, default=1024,
                   help="embedding width d' for non-cosine measures "
                        "(chi2/js snap to the nearest (2l+1)*d)")
    p.add_argument("--sigma", type=float, default=None, help="kernel scale (default 2*eps)")
    p.add_argument("--sampling-interval", type=float, default=DEFAULT_SAMPLING_INTERVAL,
                   help="homogeneous-map period for chi2/js")
    p.add_argument("--adaptive", action="store_true",
                   help="projection-threshold candidates instead of fixed top-m")
    p.add_argument("--adaptive-threshold-form", choices=list(THRESHOLD_FORMS),
                   default="one-minus-eps")
    p.add_argument("--candidate-cap", type=int, default=None,
                   help="adaptive per-direction candidate cap (default 8*min-pts)")
    p.add_argument("--seed", type=int, default=0)


def _output_args(p) -> None:
    p.add_argument("--out", default=None, help="labels CSV or ordering JSON/CSV")
    p.add_argument("--report", default=None, help="report JSON path (default: stdout)")
    p.add_argument("--plot", action="store_true", help="render figures next to --out")


def _approx_pipeline(args):
    """Shared front half: load, embed, index, neighborhoods."""
    t0 = time.perf_counter()
    dataset = load_dataset(args.data, fmt=args.format, label_column=args.label_column)
    measure = canonical_measure(args.dist)
    threads = args.threads if args.threads else default_threads()
    params = NeighborhoodParams(
        eps=args.eps,
        min_pts=args.min_pts,
        mode="adaptive" if args.adaptive else "fixed-m",
        adaptive_threshold_form=args.adaptive_threshold_form,
        candidate_cap=args.candidate_cap,
    )
    params.validate()
    timings = {"load": time.perf_counter() - t0}

    t0 = time.perf_counter()
    if measure == "cosine":
        unit = normalize_to_sphere(dataset.points)
        index_eps = args.eps
    else:
        if measure in ("l1", "l2"):
            d_prime = args.kernel_features
            sigma = args.sigma if args.sigma is not None else 2.0 * args.eps
        else:
            d_prime = homogeneous_d_prime(dataset.d, args.kernel_features)
            sigma = None
        config = EmbeddingConfig(
            measure=measure,
            input_dim=dataset.d,
            d_prime=d_prime,
            sigma=sigma,
            sampling_interval=args.sampling_interval,
            seed=args.seed,
        )
        fmap = build_feature_map(config)
        unit = fmap.apply_batch(dataset.points)
        index_eps = embedded_epsilon(args.eps, fmap)
    timings["embed"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    m = args.top_points if args.top_points is not None else args.min_pts
    depth = max(m, params.cap()) if args.adaptive else m
    index = build_index(
        unit,
        n_projections=args.projections,
        k=args.top_vectors,
        m=m,
        seed=args.seed + 1,
        threads=threads,
        depth=depth,
    )
    timings["index"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    if args.adaptive:
        core = find_core_points_adaptive(
            dataset, index, params, measure, threads=threads, index_eps=index_eps
        )
    else:
        core = find_core_points(dataset, index, params, measure, threads=threads)
    timings["neighbors"] = time.perf_counter() - t0
    return dataset, unit, index, core, params, measure, threads, timings


def cmd_sdbscan(args) -> int:
    dataset, unit, index, core, params, measure, threads, timings = _approx_pipeline(args)
    t0 = time.perf_counter()
    labels = form_clusters(core)
    if args.cluster_noise:
        labels = label_noncore_1nn(
            unit, core, labels, index,
            sample_fraction=args.sample_fraction,
            seed=args.seed + 2,
            threads=threads,
        )
    timings["cluster"] = time.perf_counter() - t0

    if args.out:
        write_labels(args.out, labels.labels)
        if args.plot:
            plots.cluster_sizes_plot(labels, _plot_path(args.out, "clusters"))
    _emit_report(args, labels.labels, dataset.labels, timings)
    return 0


def cmd_soptics(args) -> int:
    dataset, unit, index, core, params, measure, threads, timings = _approx_pipeline(args)
    t0 = time.perf_counter()
    ordering = run_soptics(dataset, core, params, measure=measure)
    timings["sweep"] = time.perf_counter() - t0
    _write_ordering(args, ordering)
    _emit_report(args, None, None, timings)
    return 0


def _exact_guard(args, dataset) -> None:
    if dataset.n > EXACT_GUARD and not args.allow_large:
        raise ValueError(
            f"{dataset.n} points exceed the exact-mode guard of {EXACT_GUARD}; "
            "rerun with --allow-large if the quadratic cost is intended"
        )


def cmd_exact_dbscan(args) -> int:
    t0 = time.perf_counter()
    dataset = load_dataset(args.data, fmt=args.format, label_column=args.label_column)
    _exact_guard(args, dataset)
    threads = args.threads if args.threads else default_threads()
    timings = {"load": time.perf_counter() - t0}
    t0 = time.perf_counter()
    labels = form_clusters(
        exact_range(dataset, args.eps, args.dist, threads=threads).as_core_set(args.min_pts)
    )
    timings["exact"] = time.perf_counter() - t0
    if args.out:
        write_labels(args.out, labels.labels)
        if args.plot:
            plots.cluster_sizes_plot(labels, _plot_path(args.out, "clusters"))
    _emit_report(args, labels.labels, dataset.labels, timings)
    return 0


def cmd_exact_optics(args) -> int:
    t0 = time.perf_counter()
    dataset = load_dataset(args.data, fmt=args.format, label_column=args.label_column)
    _exact_guard(args, dataset)
    threads = args.threads if args.threads else default_threads()
    timings = {"load": time.perf_counter() - t0}
    t0 = time.perf_counter()
    ordering = exact_optics(dataset, args.eps, args.min_pts, args.dist, threads=threads)
    timings["exact"] = time.perf_counter() - t0
    _write_ordering(args, ordering)
    _emit_report(args, None, None, timings)
    return 0


def cmd_extract(args) -> int:
    text = Path(args.ordering).read_text()
    ordering = ReachabilityOrdering.from_json(text)
    labels = extract_eps_cut(ordering, args.eps_cut)
    if args.out:
        write_labels(args.out, labels.labels)
        if args.plot:
            plots.reachability_plot(ordering, _plot_path(args.out, "reachability"),
                                    eps_cut=args.eps_cut)
            plots.cluster_sizes_plot(labels, _plot_path(args.out, "clusters"))
    _emit_report(args, labels.labels, None, {})
    return 0


def cmd_synth(args) -> int:
    if args.kind == "caps":
        dataset, cert = spherical_caps(
            n_per_cluster=args.per_cluster,
            n_clusters=args.clusters,
            d=args.dim,
            cap_angle=args.cap_angle,
            noise_count=args.noise,
            seed=args.seed,
        )
        info = {
            "kind": "caps",
            "n": dataset.n,
            "max_intra": cert.max_intra,
            "min_inter": cert.min_inter,
            "gap_mid": cert.gap_mid,
        }
    else:
        dataset = gaussian_blobs(
            n_per_cluster=args.per_cluster,
            n_clusters=args.clusters,
            d=args.dim,
            center_scale=args.center_scale,
            std=args.std,
            noise_count=args.noise,
            seed=args.seed,
            nonnegative=args.nonnegative,
        )
        info = {"kind": "blobs", "n": dataset.n}
    write_dataset_csv(args.out, dataset)
    print(json.dumps(info, indent=2))
    return 0


def cmd_eval(args) -> int:
    a = read_labels(args.pred)
    b = read_labels(args.truth)
    print(json.dumps({"nmi": nmi(a, b)}, indent=2))
    return 0


def _write_ordering(args, ordering) -> None:
    if args.out:
        out = Path(args.out)
        if out.suffix == ".csv":
            out.write_text(ordering.to_csv())
        else:
            out.write_text(ordering.to_json() + "\n")
        if args.plot:
            plots.reachability_plot(ordering, _plot_path(args.out, "reachability"))


def _plot_path(out: str, tag: str) -> str:
    p = Path(out)
    return str(p.with_name(f"{p.stem}.{tag}.png"))


def _emit_report(args, pred, truth, timings) -> None:
    params = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in ("func",) and not callable(v)
    }
    report = RunReport(params=params, timings=timings)
    if pred is not None:
        report.num_clusters, report.noise_fraction = summarize_labels(pred)
        if truth is not None:
            report.nmi = nmi(pred, truth)
    text = report.to_json()
    if args.report:
        Path(args.report).write_text(text + "\n")
    else:
        print(text)


def write_labels(path, labels) -> None:
    lines = ["point_id,cluster_id"]
    for i, lab in enumerate(np.asarray(labels).tolist()):
        lines.append(f"{i},{int(lab)}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_labels(path) -> np.ndarray:
    raw = np.loadtxt(path, delimiter=",", skiprows=1, dtype=np.int64, ndmin=2)
    order = np.argsort(raw[:, 0])
    return raw[order, 1]


def write_dataset_csv(path, dataset: Dataset) -> None:
    lines = []
    labels = dataset.labels if dataset.labels is not None else np.zeros(dataset.n, dtype=np.int64)
    for row, lab in zip(dataset.points, labels):
        lines.append(",".join(f"{v:.17g}" for v in row) + f",{int(lab)}")
    Path(path).write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    sys.exit(main())
