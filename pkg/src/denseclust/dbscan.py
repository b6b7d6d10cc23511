"""DBSCAN: core-point test, breadth-first cluster expansion, border and
noise handling.

Traversal is pinned for reproducibility: seeds are visited in ascending
point id, expansion is breadth-first over a queue of core points, and a
border point reachable from several clusters goes to whichever cluster's
expansion reaches it first. Core-point cluster membership does not depend
on this order; only border assignment does.
"""

from __future__ import annotations

from collections import deque
from enum import Enum

from .core import NOISE, UNCLASSIFIED, Dataset, DensityParams, Labeling, validate
from .index import NeighborTable, QueryStats, SpatialIndex


class PointClass(str, Enum):
    CORE = "core"
    BORDER = "border"
    NOISE = "noise"


def _dbscan_labels(neighbors: list[list[int]], min_pts: int) -> list[int]:
    """Expansion over precomputed neighbor lists; shared by every caller."""
    n = len(neighbors)
    core = [len(nb) >= min_pts for nb in neighbors]
    labels = [UNCLASSIFIED] * n
    cid = 0
    for seed in range(n):
        if labels[seed] != UNCLASSIFIED:
            continue
        if not core[seed]:
            labels[seed] = NOISE  # may be relabeled border by a later expansion
            continue
        labels[seed] = cid
        queue = deque([seed])
        while queue:
            p = queue.popleft()
            for q in neighbors[p]:
                if labels[q] == UNCLASSIFIED or labels[q] == NOISE:
                    labels[q] = cid
                    if core[q]:
                        queue.append(q)
        cid += 1
    return labels


def dbscan(
    d: Dataset,
    params: DensityParams,
    ix: SpatialIndex,
    stats: QueryStats | None = None,
) -> Labeling:
    """Cluster a dataset; every point ends labeled noise or a cluster id."""
    validate(d)
    table = NeighborTable(d, ix, params.radius, stats)
    return dbscan_from_table(table, params.min_pts)


def dbscan_from_table(table: NeighborTable, min_pts: int, radius: float | None = None) -> Labeling:
    """DBSCAN over an existing neighbor table, optionally at a sub-radius."""
    neighbors = [table.neighbors(i, radius) for i in range(len(table))]
    return Labeling(tuple(_dbscan_labels(neighbors, min_pts)))


def classify_points(
    d: Dataset,
    params: DensityParams,
    ix: SpatialIndex,
    stats: QueryStats | None = None,
) -> tuple[PointClass, ...]:
    """Tag each point core, border, or noise.

    Core iff its neighborhood holds at least ``min_pts`` points (itself
    included); border iff not core but within the radius of some core
    point; noise otherwise.
    """
    validate(d)
    table = NeighborTable(d, ix, params.radius, stats)
    return classify_from_table(table, params.min_pts)


def classify_from_table(
    table: NeighborTable, min_pts: int, radius: float | None = None
) -> tuple[PointClass, ...]:
    n = len(table)
    counts = [table.count(i, radius) for i in range(n)]
    core = [c >= min_pts for c in counts]
    out = []
    for i in range(n):
        if core[i]:
            out.append(PointClass.CORE)
        elif any(core[q] for q in table.neighbors(i, radius)):
            out.append(PointClass.BORDER)
        else:
            out.append(PointClass.NOISE)
    return tuple(out)


def core_point_ids(
    d: Dataset, params: DensityParams, ix: SpatialIndex
) -> frozenset[int]:
    """Ids of all core points under the given parameters."""
    tags = classify_points(d, params, ix)
    return frozenset(i for i, t in enumerate(tags) if t is PointClass.CORE)
