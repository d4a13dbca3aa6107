"""Density-based clustering accelerated by structured random projections.

Approximate DBSCAN and OPTICS for high-dimensional data under cosine, L2,
L1, chi-squared and Jensen-Shannon distances, with brute-force oracles for
validation.
"""

from .cluster import ClusterLabels, form_clusters, label_noncore_1nn
from .data import Dataset, PreparedPoints, distance, load_dataset, normalize_to_sphere
from .embed import EmbeddingConfig, FeatureMap, build_feature_map, embedded_epsilon
from .evaluate import RunReport, nmi
from .exact import ExactNeighborhoods, exact_dbscan, exact_optics, exact_range
from .neighbors import CoreSet, NeighborhoodParams, find_core_points, find_core_points_adaptive
from .optics import (
    ReachabilityOrdering,
    core_dist,
    extract_eps_cut,
    reach_dist,
    run_soptics,
)
from .projection import CeosIndex, SpinnerTransform, build_index, estimate_inner_product, fwht
from .synth import Certificate, gaussian_blobs, spherical_caps

__version__ = "0.1.0"

__all__ = [
    "ClusterLabels",
    "form_clusters",
    "label_noncore_1nn",
    "Dataset",
    "PreparedPoints",
    "distance",
    "load_dataset",
    "normalize_to_sphere",
    "EmbeddingConfig",
    "FeatureMap",
    "build_feature_map",
    "embedded_epsilon",
    "RunReport",
    "nmi",
    "ExactNeighborhoods",
    "exact_dbscan",
    "exact_optics",
    "exact_range",
    "CoreSet",
    "NeighborhoodParams",
    "find_core_points",
    "find_core_points_adaptive",
    "ReachabilityOrdering",
    "core_dist",
    "extract_eps_cut",
    "reach_dist",
    "run_soptics",
    "CeosIndex",
    "SpinnerTransform",
    "build_index",
    "estimate_inner_product",
    "fwht",
    "Certificate",
    "gaussian_blobs",
    "spherical_caps",
    "__version__",
]
