"""EnDBSCAN: expansion through core-neighborhoods gated by a
core-distance variance factor, aimed at embedded and nested clusters.

Key behaviors:

* A point whose core-distance exceeds the radius (or is undefined) is a
  noise candidate; it can still be claimed later as a cluster member when
  the gate allows it.
* A cluster member expands only through the points inside its own
  core-distance radius, not the full neighborhood radius. In dense
  regions expansion therefore proceeds in small steps.
* A candidate joins the cluster only if its core-distance differs from
  the reference core-distance by at most ``beta``. The reference is the
  cluster's seed point by default (``mode="seed"``); ``mode="chain"``
  compares against the admitting member instead, kept for
  experimentation.
* A candidate rejected by the gate is left in the unprocessed pool
  rather than marked noise, so a neighboring cluster of the other
  density regime can claim it or it can seed its own cluster. This is
  the repeated analysis of points on the boundary between two density
  regimes. A rejected point never claimed by anything ends as noise.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from .core import NOISE, UNCLASSIFIED, Dataset, Labeling, validate
from .errors import ParameterError
from .index import NeighborTable, QueryStats, SpatialIndex

UNDEFINED = math.inf


@dataclass(frozen=True)
class EnParams:
    """Radius, core-point population, and the variance factor ``beta``.

    ``beta`` bounds the allowed core-distance difference inside one
    cluster; ``math.inf`` disables the gate entirely.
    """

    radius: float
    min_pts: int
    beta: float
    mode: str = "seed"

    def __post_init__(self):
        if not (self.radius > 0) or not math.isfinite(self.radius):
            raise ParameterError(f"radius must be a positive real, got {self.radius}")
        if self.min_pts < 1:
            raise ParameterError(f"min_pts must be >= 1, got {self.min_pts}")
        if not (self.beta >= 0):
            raise ParameterError(f"beta must be >= 0, got {self.beta}")
        if self.mode not in ("seed", "chain"):
            raise ParameterError(f"mode must be 'seed' or 'chain', got {self.mode!r}")


@dataclass
class ClusterTrace:
    """Admissions of one cluster, for gate-soundness checks."""

    cluster_id: int
    seed: int
    seed_core_distance: float
    admissions: list[tuple[int, float, float]] = field(default_factory=list)
    # (point_id, its core_distance, reference core_distance used)


def _gate(reference_cd: float, candidate_cd: float, beta: float) -> bool:
    if beta == math.inf:
        return True
    if candidate_cd == UNDEFINED or reference_cd == UNDEFINED:
        return False
    return abs(candidate_cd - reference_cd) <= beta


def endbscan_from_table(
    table: NeighborTable, params: EnParams
) -> tuple[Labeling, list[ClusterTrace]]:
    if params.radius > table.radius:
        raise ParameterError(
            f"radius {params.radius} exceeds table radius {table.radius}"
        )
    n = len(table)
    # Undefined (inf) when the min_pts-th point lies beyond the radius.
    coredist = []
    for i in range(n):
        kth = table.kth_distance(i, params.min_pts)
        coredist.append(kth if kth <= params.radius else UNDEFINED)
    labels = [UNCLASSIFIED] * n
    traces: list[ClusterTrace] = []
    cid = 0
    for seed in range(n):
        if labels[seed] != UNCLASSIFIED:
            continue
        if coredist[seed] == UNDEFINED:
            labels[seed] = NOISE  # noise candidate; a later cluster may claim it
            continue
        trace = ClusterTrace(cid, seed, coredist[seed])
        labels[seed] = cid
        queue = deque([seed])
        while queue:
            p = queue.popleft()
            reference = coredist[seed] if params.mode == "seed" else coredist[p]
            # Core-neighborhood: only the points within p's core-distance.
            for q in table.neighbors(p, coredist[p]):
                if labels[q] != UNCLASSIFIED and labels[q] != NOISE:
                    continue
                if not _gate(reference, coredist[q], params.beta):
                    continue  # back to the pool; re-analyzed from elsewhere
                labels[q] = cid
                trace.admissions.append((q, coredist[q], reference))
                if coredist[q] != UNDEFINED:
                    queue.append(q)
        traces.append(trace)
        cid += 1
    return Labeling(tuple(labels)), traces


def endbscan_with_trace(
    d: Dataset,
    params: EnParams,
    ix: SpatialIndex,
    stats: QueryStats | None = None,
) -> tuple[Labeling, list[ClusterTrace]]:
    validate(d)
    table = NeighborTable(d, ix, params.radius, stats)
    return endbscan_from_table(table, params)


def endbscan(
    d: Dataset,
    params: EnParams,
    ix: SpatialIndex,
    stats: QueryStats | None = None,
) -> Labeling:
    """Cluster a dataset with the core-distance variance gate."""
    labeling, _ = endbscan_with_trace(d, params, ix, stats)
    return labeling
