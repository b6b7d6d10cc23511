"""Neighborhood-difference clustering with tolerance factor ``delta`` and
no core-point population threshold.

There is no min_pts here: any point with at least one other point in its
neighborhood may seed a cluster, and every admitted member expands. A
neighbor joins the cluster of the member examining it only when their
neighborhood sizes differ by at most ``delta``; a point rejected by every
adjacent cluster that also fails to gather any member of its own ends as
noise. With the gate disabled (``delta >= n``) the result reduces to the
connected components at the given radius, isolated points being noise.

Small ``delta`` values deliberately over-segment (many insignificant
clusters); an optional post-filter can drop clusters below a minimum
size, which is plumbing on top of the method, not part of it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
import math

from .core import NOISE, UNCLASSIFIED, Dataset, Labeling, canonicalize, validate
from .errors import ParameterError
from .index import NeighborTable, QueryStats, SpatialIndex
from .kdvariant import GateTrace


@dataclass(frozen=True)
class NDiffParams:
    radius: float
    delta: int

    def __post_init__(self):
        if not (self.radius > 0) or not math.isfinite(self.radius):
            raise ParameterError(f"radius must be a positive real, got {self.radius}")
        if self.delta < 0:
            raise ParameterError(f"delta must be >= 0, got {self.delta}")


def ndiff_from_table(
    table: NeighborTable, delta: int, radius: float | None = None
) -> tuple[Labeling, list[GateTrace]]:
    if radius is not None and radius > table.radius:
        raise ParameterError(
            f"radius {radius} exceeds table radius {table.radius}"
        )
    n = len(table)
    neighbors = [table.neighbors(i, radius) for i in range(n)]
    counts = [len(nb) for nb in neighbors]
    labels = [UNCLASSIFIED] * n
    traces: list[GateTrace] = []
    cid = 0
    for seed in range(n):
        if labels[seed] == UNCLASSIFIED and counts[seed] < 2:
            labels[seed] = NOISE  # isolated: no non-self neighbor
            continue
        if labels[seed] != UNCLASSIFIED:
            continue
        members = [seed]
        trace = GateTrace(cid)
        labels[seed] = cid
        queue = deque([seed])
        while queue:
            p = queue.popleft()
            for q in neighbors[p]:
                if labels[q] != UNCLASSIFIED and labels[q] != NOISE:
                    continue
                if abs(counts[p] - counts[q]) > delta:
                    continue  # rejected here; other clusters may still claim it
                labels[q] = cid
                members.append(q)
                trace.admissions.append((p, counts[p], q, counts[q]))
                queue.append(q)
        if len(members) == 1:
            # Failed the gate from every adjacent cluster and found no
            # member of its own: noise (still claimable by a later run).
            labels[seed] = NOISE
        else:
            traces.append(trace)
            cid += 1
    out = canonicalize(Labeling(tuple(labels)))
    return out, traces


def ndiff_cluster_with_trace(
    d: Dataset,
    p: NDiffParams,
    ix: SpatialIndex,
    stats: QueryStats | None = None,
) -> tuple[Labeling, list[GateTrace]]:
    validate(d)
    table = NeighborTable(d, ix, p.radius, stats)
    return ndiff_from_table(table, p.delta)


def ndiff_cluster(
    d: Dataset,
    p: NDiffParams,
    ix: SpatialIndex,
    stats: QueryStats | None = None,
) -> Labeling:
    labeling, _ = ndiff_cluster_with_trace(d, p, ix, stats)
    return labeling


def drop_small_clusters(l: Labeling, min_size: int) -> Labeling:
    """Post-filter relabeling clusters smaller than ``min_size`` as noise."""
    if min_size < 1:
        raise ParameterError(f"min_size must be >= 1, got {min_size}")
    sizes = l.cluster_sizes
    out = [
        NOISE if (x >= 0 and sizes[x] < min_size) else x
        for x in l.labels
    ]
    return canonicalize(Labeling(tuple(out)))
