"""OPTICS: augmented point ordering with core- and reachability-distances,
plot export, and threshold-based cluster extraction.

Undefined distances are represented as ``math.inf``; that makes them sort
after every finite value in the seed priority queue and serialize as the
``inf`` token in plot files.

Determinism: unprocessed points are seeded in ascending id; the seed queue
pops the smallest (reachability, id) pair, so equal reachabilities resolve
by smallest id.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .core import NOISE, Dataset, DensityParams, Labeling, canonicalize, validate
from .errors import ParameterError
from .index import NeighborTable, QueryStats, SpatialIndex

UNDEFINED = math.inf


@dataclass(frozen=True)
class OpticsEntry:
    point_id: int
    core_distance: float
    reachability: float


@dataclass(frozen=True)
class OpticsOrdering:
    """Processing order over all points, one entry per point."""

    entries: tuple[OpticsEntry, ...]
    params: DensityParams

    def __len__(self) -> int:
        return len(self.entries)


def core_distance(
    ix: SpatialIndex, p, params: DensityParams, stats: QueryStats | None = None
) -> float:
    """Distance to the min_pts-th nearest point (self counted), or inf.

    Undefined (inf) when fewer than ``min_pts`` points lie within the
    radius, i.e. the point is not core.
    """
    n = len(ix)
    if params.min_pts > n:
        return UNDEFINED
    kth = ix.kth_neighbor_distance(p, params.min_pts, stats)
    return kth if kth <= params.radius else UNDEFINED


def optics_order_from_table(
    table: NeighborTable, params: DensityParams
) -> OpticsOrdering:
    """Ordering at ``params.radius``; the table may be built at any
    radius at least that large."""
    if params.radius > table.radius:
        raise ParameterError(
            f"ordering radius {params.radius} exceeds table radius {table.radius}"
        )
    n = len(table)
    radius = params.radius
    coredist = []
    for i in range(n):
        kth = table.kth_distance(i, params.min_pts)
        coredist.append(kth if kth <= radius else UNDEFINED)
    reach = [UNDEFINED] * n
    processed = [False] * n
    order: list[int] = []
    heap: list[tuple[float, int]] = []

    def update(p: int) -> None:
        cd = coredist[p]
        if cd == UNDEFINED:
            return
        for dist, q in table.neighbor_dists(p):
            if dist > radius:
                break  # rows are distance-sorted
            if processed[q]:
                continue
            new_reach = cd if cd > dist else dist
            if new_reach < reach[q]:
                reach[q] = new_reach
                heapq.heappush(heap, (new_reach, q))

    for seed in range(n):
        if processed[seed]:
            continue
        processed[seed] = True
        order.append(seed)
        update(seed)
        while heap:
            r, q = heapq.heappop(heap)
            if processed[q] or r != reach[q]:
                continue  # stale entry superseded by a smaller reachability
            processed[q] = True
            order.append(q)
            update(q)

    entries = tuple(
        OpticsEntry(point_id=i, core_distance=coredist[i], reachability=reach[i])
        for i in order
    )
    return OpticsOrdering(entries=entries, params=params)


def optics_order(
    d: Dataset,
    params: DensityParams,
    ix: SpatialIndex,
    stats: QueryStats | None = None,
) -> OpticsOrdering:
    """Compute the augmented cluster ordering of a dataset."""
    validate(d)
    table = NeighborTable(d, ix, params.radius, stats)
    return optics_order_from_table(table, params)


def extract_clusters(o: OpticsOrdering, eps_prime: float) -> Labeling:
    """Threshold-scan extraction, the DBSCAN-equivalent partition at
    radius ``eps_prime``.

    A point whose reachability exceeds the threshold starts a new cluster
    if its own core-distance is within the threshold, otherwise it is
    noise; any other point joins the cluster currently open.
    """
    if not (eps_prime > 0):
        raise ParameterError(f"eps_prime must be positive, got {eps_prime}")
    if eps_prime > o.params.radius:
        raise ParameterError(
            f"eps_prime {eps_prime} exceeds the ordering radius {o.params.radius}"
        )
    labels = [NOISE] * len(o.entries)
    current = NOISE
    for e in o.entries:
        if e.reachability > eps_prime:
            if e.core_distance <= eps_prime:
                current += 1
                labels[e.point_id] = current
            else:
                # Noise entry; the open cluster stays open for later
                # entries whose reachability is back under the threshold.
                labels[e.point_id] = NOISE
        else:
            labels[e.point_id] = current if current >= 0 else NOISE
    return Labeling(tuple(labels))


def extract_clusters_multi(o: OpticsOrdering, thresholds) -> Labeling:
    """Extraction with one threshold per density level.

    Runs the threshold scan at every given threshold and assigns each
    point to its cluster at the smallest threshold that still clusters
    it. Coarse clusters are thereby refined wherever a denser level
    separates, which is what reading one radius per valley off the
    reachability plot achieves.
    """
    ts = sorted(set(float(t) for t in thresholds), reverse=True)
    if not ts:
        raise ParameterError("at least one threshold is required")
    layers = [extract_clusters(o, t) for t in ts]  # coarse -> fine
    n = len(o.entries)
    keys: list[tuple[int, int] | None] = [None] * n
    for level in range(len(layers) - 1, -1, -1):  # finest first
        lab = layers[level].labels
        for i in range(n):
            if keys[i] is None and lab[i] != NOISE:
                keys[i] = (level, lab[i])
    mapping: dict[tuple[int, int], int] = {}
    out = []
    for k in keys:
        if k is None:
            out.append(NOISE)
        else:
            if k not in mapping:
                mapping[k] = len(mapping)
            out.append(mapping[k])
    return canonicalize(Labeling(tuple(out)))


def reachability_plot(
    o: OpticsOrdering,
) -> list[tuple[int, int, float, float]]:
    """Rows (order_index, point_id, reachability, core_distance) in
    processing order. Undefined values stay ``inf``; file writers render
    them as the token ``inf``."""
    return [
        (idx, e.point_id, e.reachability, e.core_distance)
        for idx, e in enumerate(o.entries)
    ]


def suggest_threshold(o: OpticsOrdering) -> float | None:
    """Advisory helper: midpoint of the largest gap between consecutive
    sorted finite reachability values, or None when fewer than two exist.

    Picking the extraction threshold is ultimately the caller's call;
    this is only a starting proposal.
    """
    finite = sorted(e.reachability for e in o.entries if math.isfinite(e.reachability))
    if len(finite) < 2:
        return None
    best_gap = -1.0
    best_mid = None
    for a, b in zip(finite, finite[1:]):
        gap = b - a
        if gap > best_gap:
            best_gap = gap
            best_mid = (a + b) / 2.0
    return best_mid
