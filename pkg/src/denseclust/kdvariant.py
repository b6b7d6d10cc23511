"""DBSCAN variant that estimates its radius from the sorted k-distance
graph and gates admissions by a neighbor-count tolerance ``alpha``.

The k-distance graph plots, in ascending order, each point's distance to
its k-th nearest *other* point (the conventional reading of a k-distance
plot, so the self term is dropped; the spatial index counts the center,
hence the k+1 query inside :func:`k_distance_graph`). The estimated
radius sits at the largest jump of the first-order forward differences,
which also serves as the noise threshold.

Clustering is DBSCAN's traversal plus one extra admission rule: a
neighbor joins a core point's cluster only when their full neighborhood
sizes differ by at most ``alpha``. The comparison is against the
admitting core point (chained), not the cluster seed.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from .core import NOISE, UNCLASSIFIED, Dataset, Labeling, validate
from .errors import NoKneeError, ParameterError
from .index import NeighborTable, QueryStats, SpatialIndex


@dataclass(frozen=True)
class KDistanceGraph:
    """Ascending k-th-neighbor distances and their forward differences."""

    k: int
    sorted_distances: tuple[float, ...]
    first_derivative: tuple[float, ...]
    order: tuple[int, ...]  # point id per rank, ties resolved by id

    def __len__(self) -> int:
        return len(self.sorted_distances)


@dataclass(frozen=True)
class VariantParams:
    """User-supplied min_pts and the neighbor-count tolerance ``alpha``."""

    min_pts: int
    alpha: int

    def __post_init__(self):
        if self.min_pts < 1:
            raise ParameterError(f"min_pts must be >= 1, got {self.min_pts}")
        if self.alpha < 0:
            raise ParameterError(f"alpha must be >= 0, got {self.alpha}")


def k_distance_graph(
    d: Dataset, k: int, ix: SpatialIndex, stats: QueryStats | None = None
) -> KDistanceGraph:
    """Each point's distance to its k-th nearest other point, sorted."""
    validate(d)
    n = len(d)
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    if k >= n:
        raise ParameterError(f"k must be < n = {n}, got {k}")
    pairs = []
    for i in range(n):
        # k+1 counting self = k-th other point.
        dist = ix.kth_neighbor_distance(d.coords[i], k + 1, stats)
        pairs.append((dist, i))
    pairs.sort()
    sorted_d = tuple(dist for dist, _ in pairs)
    deriv = tuple(b - a for a, b in zip(sorted_d, sorted_d[1:]))
    return KDistanceGraph(
        k=k,
        sorted_distances=sorted_d,
        first_derivative=deriv,
        order=tuple(i for _, i in pairs),
    )


def estimate_radius(g: KDistanceGraph) -> float:
    """Neighborhood radius from the largest slope jump of the graph.

    Returns the midpoint of the maximal forward difference (smallest
    index on ties), i.e. a value strictly inside the jump that separates
    cluster-interior distances from the larger ones beyond the knee. A
    flat graph has no knee; the caller must then supply a radius.
    """
    if len(g.sorted_distances) < 3:
        raise ParameterError("need at least 3 points to estimate a radius")
    best = max(g.first_derivative)
    if best <= 0.0:
        raise NoKneeError("all k-distances are equal; supply a radius explicitly")
    i = g.first_derivative.index(best)
    return (g.sorted_distances[i] + g.sorted_distances[i + 1]) / 2.0


@dataclass
class GateTrace:
    """Admission records (admitting count, admitted count) per cluster."""

    cluster_id: int
    admissions: list[tuple[int, int, int, int]] = field(default_factory=list)
    # (admitting_id, admitting_count, admitted_id, admitted_count)


def _gated_dbscan(
    neighbors: list[list[int]], min_pts: int, alpha: int
) -> tuple[list[int], list[GateTrace]]:
    n = len(neighbors)
    counts = [len(nb) for nb in neighbors]
    core = [c >= min_pts for c in counts]
    labels = [UNCLASSIFIED] * n
    traces: list[GateTrace] = []
    cid = 0
    for seed in range(n):
        if labels[seed] != UNCLASSIFIED:
            continue
        if not core[seed]:
            labels[seed] = NOISE
            continue
        trace = GateTrace(cid)
        labels[seed] = cid
        queue = deque([seed])
        while queue:
            p = queue.popleft()
            for q in neighbors[p]:
                if labels[q] != UNCLASSIFIED and labels[q] != NOISE:
                    continue
                if abs(counts[p] - counts[q]) > alpha:
                    continue  # neighborhood-difference beyond tolerance
                labels[q] = cid
                trace.admissions.append((p, counts[p], q, counts[q]))
                if core[q]:
                    queue.append(q)
        traces.append(trace)
        cid += 1
    return labels, traces


def kdvariant_cluster_with_trace(
    d: Dataset,
    p: VariantParams,
    ix: SpatialIndex,
    radius: float | None = None,
    stats: QueryStats | None = None,
) -> tuple[Labeling, list[GateTrace], float]:
    """Cluster with the neighbor-count gate; returns the radius used.

    Without an explicit radius the k-distance graph with k = min_pts is
    built and the knee estimate is used.
    """
    validate(d)
    if radius is None:
        g = k_distance_graph(d, p.min_pts, ix, stats)
        radius = estimate_radius(g)
    if not (radius > 0) or not math.isfinite(radius):
        raise ParameterError(f"radius must be a positive real, got {radius}")
    table = NeighborTable(d, ix, radius, stats)
    neighbors = [table.neighbors(i) for i in range(len(table))]
    labels, traces = _gated_dbscan(neighbors, p.min_pts, p.alpha)
    return Labeling(tuple(labels)), traces, radius


def kdvariant_cluster(
    d: Dataset,
    p: VariantParams,
    ix: SpatialIndex,
    radius: float | None = None,
    stats: QueryStats | None = None,
) -> Labeling:
    labeling, _, _ = kdvariant_cluster_with_trace(d, p, ix, radius, stats)
    return labeling
