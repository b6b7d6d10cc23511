"""Density-based clustering: DBSCAN, OPTICS, EnDBSCAN, a k-distance
radius-estimating DBSCAN variant, and neighborhood-difference clustering,
plus synthetic benchmark scenarios and validation metrics.
"""

from .core import (
    NOISE,
    UNCLASSIFIED,
    Dataset,
    DensityParams,
    Labeling,
    Point,
    canonicalize,
    distance,
    validate,
)
from .datasets import GenSpec, Shape, generate, load, save
from .dbscan import PointClass, classify_points, core_point_ids, dbscan
from .endbscan import EnParams, endbscan, endbscan_with_trace
from .index import NeighborTable, QueryStats, SpatialIndex, Strategy, build
from .kdvariant import (
    KDistanceGraph,
    VariantParams,
    estimate_radius,
    k_distance_graph,
    kdvariant_cluster,
    kdvariant_cluster_with_trace,
)
from .metrics import (
    Score,
    adjusted_rand_index,
    core_restricted_agreement,
    score_against_truth,
    summarize,
)
from .ndiff import NDiffParams, drop_small_clusters, ndiff_cluster, ndiff_cluster_with_trace
from .optics import (
    OpticsEntry,
    OpticsOrdering,
    core_distance,
    extract_clusters,
    extract_clusters_multi,
    optics_order,
    reachability_plot,
    suggest_threshold,
)

__version__ = "0.1.0"

__all__ = [
    "NOISE",
    "UNCLASSIFIED",
    "Dataset",
    "DensityParams",
    "Labeling",
    "Point",
    "canonicalize",
    "distance",
    "validate",
    "GenSpec",
    "Shape",
    "generate",
    "load",
    "save",
    "PointClass",
    "classify_points",
    "core_point_ids",
    "dbscan",
    "EnParams",
    "endbscan",
    "endbscan_with_trace",
    "NeighborTable",
    "QueryStats",
    "SpatialIndex",
    "Strategy",
    "build",
    "KDistanceGraph",
    "VariantParams",
    "estimate_radius",
    "k_distance_graph",
    "kdvariant_cluster",
    "kdvariant_cluster_with_trace",
    "Score",
    "adjusted_rand_index",
    "core_restricted_agreement",
    "score_against_truth",
    "summarize",
    "NDiffParams",
    "drop_small_clusters",
    "ndiff_cluster",
    "ndiff_cluster_with_trace",
    "OpticsEntry",
    "OpticsOrdering",
    "core_distance",
    "extract_clusters",
    "extract_clusters_multi",
    "optics_order",
    "reachability_plot",
    "suggest_threshold",
    "__version__",
]
