"""Spatial index: radius queries and k-th-neighbor distances.

Two interchangeable strategies answer exactly the same queries:

* ``Strategy.TREE`` -- a balanced kd-tree built by median splits with
  small leaf buckets. This is what makes the n log n runtime regimes
  reachable.
* ``Strategy.LINEAR`` -- an unindexed scan over all points. Kept both as
  a correctness oracle for the tree and as the "no index" arm of the
  scaling benchmarks, so it deliberately stays a plain per-point loop.

Queries are boundary-inclusive (``dist <= radius``) and count the query
center itself whenever it is a dataset point, matching the neighborhood
convention of :mod:`denseclust.core`.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .core import Dataset, Point
from .errors import DimensionMismatchError, ParameterError

_LEAF_SIZE = 16


class Strategy(str, Enum):
    TREE = "tree"
    LINEAR = "linear"


@dataclass
class QueryStats:
    """Optional instrumentation accumulator passed into query calls.

    ``node_visits`` counts tree nodes touched (for the linear strategy it
    counts full-scan passes' point visits), making the complexity claims
    observable.
    """

    range_queries: int = 0
    knn_queries: int = 0
    node_visits: int = 0

    def reset(self) -> None:
        self.range_queries = 0
        self.knn_queries = 0
        self.node_visits = 0


class _Leaf:
    __slots__ = ("ids",)

    def __init__(self, ids):
        self.ids = ids


class _Split:
    __slots__ = ("axis", "value", "left", "right")

    def __init__(self, axis, value, left, right):
        self.axis = axis
        self.value = value
        self.left = left
        self.right = right


def _build_node(ids: list[int], coords, dimension: int, depth: int):
    if len(ids) <= _LEAF_SIZE:
        return _Leaf(sorted(ids))
    axis = depth % dimension
    ids.sort(key=lambda i: (coords[i][axis], i))
    mid = len(ids) // 2
    value = coords[ids[mid]][axis]
    return _Split(
        axis,
        value,
        _build_node(ids[:mid], coords, dimension, depth + 1),
        _build_node(ids[mid:], coords, dimension, depth + 1),
    )


class SpatialIndex:
    """Immutable index over a dataset; build once, query concurrently."""

    def __init__(self, dataset: Dataset, strategy: Strategy):
        self.dataset = dataset
        self.strategy = Strategy(strategy)
        self._coords = dataset.coords
        self._root = None
        if self.strategy is Strategy.TREE and len(dataset) > 0:
            self._root = _build_node(
                list(range(len(dataset))), self._coords, dataset.dimension, 0
            )

    def __len__(self) -> int:
        return len(self.dataset)

    def _check_center(self, center) -> tuple[float, ...]:
        if isinstance(center, Point):
            center = center.coords
        center = tuple(float(c) for c in center)
        if len(center) != self.dataset.dimension:
            raise DimensionMismatchError(
                f"query center has dimension {len(center)}, "
                f"index has {self.dataset.dimension}"
            )
        return center

    def range_query(
        self, center, radius: float, stats: QueryStats | None = None
    ) -> list[int]:
        """Ids of all points with ``dist(center, p) <= radius``, ascending."""
        if not (radius > 0):
            raise ParameterError(f"radius must be positive, got {radius}")
        center = self._check_center(center)
        if stats is not None:
            stats.range_queries += 1
        if len(self.dataset) == 0:
            return []
        if self.strategy is Strategy.LINEAR:
            return self._linear_range(center, radius, stats)
        out: list[int] = []
        r2 = radius * radius
        self._tree_range(self._root, center, radius, r2, r2 * (1.0 + 1e-12), out, stats)
        out.sort()
        return out

    def range_ids(
        self, point_id: int, radius: float, stats: QueryStats | None = None
    ) -> list[int]:
        """Radius query centered on dataset point ``point_id``."""
        return self.range_query(self._coords[point_id], radius, stats)

    def _linear_range(self, center, radius, stats) -> list[int]:
        # Plain loop on purpose: this arm models the unindexed O(n) scan.
        # Membership is sqrt(sum sq) <= radius; the squared comparison is
        # only a fast path, so results agree bit for bit with
        # kth_neighbor_distance at its returned value.
        r2 = radius * radius
        r2hi = r2 * (1.0 + 1e-12)
        out = []
        if len(center) == 2:
            cx, cy = center
            for i, (x, y) in enumerate(self._coords):
                dx = x - cx
                dy = y - cy
                s = dx * dx + dy * dy
                if s <= r2 or (s <= r2hi and math.sqrt(s) <= radius):
                    out.append(i)
        else:
            for i, pt in enumerate(self._coords):
                s = 0.0
                for a, b in zip(pt, center):
                    d = a - b
                    s += d * d
                if s <= r2 or (s <= r2hi and math.sqrt(s) <= radius):
                    out.append(i)
        if stats is not None:
            stats.node_visits += len(self._coords)
        return out

    def _tree_range(self, node, center, radius, r2, r2hi, out, stats) -> None:
        if stats is not None:
            stats.node_visits += 1
        if isinstance(node, _Leaf):
            coords = self._coords
            for i in node.ids:
                s = 0.0
                for a, b in zip(coords[i], center):
                    d = a - b
                    s += d * d
                if s <= r2 or (s <= r2hi and math.sqrt(s) <= radius):
                    out.append(i)
            return
        delta = center[node.axis] - node.value
        if delta <= 0:
            self._tree_range(node.left, center, radius, r2, r2hi, out, stats)
            if delta * delta <= r2hi:
                self._tree_range(node.right, center, radius, r2, r2hi, out, stats)
        else:
            self._tree_range(node.right, center, radius, r2, r2hi, out, stats)
            if delta * delta <= r2hi:
                self._tree_range(node.left, center, radius, r2, r2hi, out, stats)

    def kth_neighbor_distance(
        self, center, k: int, stats: QueryStats | None = None
    ) -> float:
        """Distance to the k-th nearest dataset point (1-based).

        The center counts as its own 1st neighbor when it is a dataset
        point, since its distance 0 enters the multiset like any other.
        Ties are broken by distance value only: equal distances give equal
        results regardless of id order.
        """
        n = len(self.dataset)
        if k < 1 or k > n:
            raise ParameterError(f"k must be in 1..{n}, got {k}")
        center = self._check_center(center)
        if stats is not None:
            stats.knn_queries += 1
        if self.strategy is Strategy.LINEAR:
            sq = []
            for pt in self._coords:
                s = 0.0
                for a, b in zip(pt, center):
                    d = a - b
                    s += d * d
                sq.append(s)
            sq.sort()
            if stats is not None:
                stats.node_visits += n
            return math.sqrt(sq[k - 1])
        # Max-heap of the k best squared distances, kept as a sorted list
        # (k is small in every caller).
        best: list[float] = []
        self._tree_knn(self._root, center, k, best, stats)
        return math.sqrt(best[k - 1])

    def _tree_knn(self, node, center, k, best, stats) -> None:
        if stats is not None:
            stats.node_visits += 1
        if isinstance(node, _Leaf):
            coords = self._coords
            for i in node.ids:
                s = 0.0
                for a, b in zip(coords[i], center):
                    d = a - b
                    s += d * d
                if len(best) < k:
                    best.append(s)
                    best.sort()
                elif s < best[-1]:
                    best[-1] = s
                    best.sort()
            return
        delta = center[node.axis] - node.value
        near, far = (
            (node.left, node.right) if delta <= 0 else (node.right, node.left)
        )
        self._tree_knn(near, center, k, best, stats)
        if len(best) < k or delta * delta <= best[-1]:
            self._tree_knn(far, center, k, best, stats)


def build(dataset: Dataset, strategy: Strategy | str = Strategy.TREE) -> SpatialIndex:
    """Build an index over a validated dataset.

    An empty dataset yields an explicit empty index whose queries return
    empty results.
    """
    return SpatialIndex(dataset, Strategy(strategy))


class NeighborTable:
    """Per-point sorted (distance, id) neighbor lists at a fixed radius.

    Built with n range queries, then answers sub-radius lookups by
    bisection. The clustering algorithms all consume neighborhoods
    through this table so that a benchmark run can share one table
    across a whole parameter grid.
    """

    def __init__(
        self,
        dataset: Dataset,
        index: SpatialIndex,
        radius: float,
        stats: QueryStats | None = None,
    ):
        if not (radius > 0):
            raise ParameterError(f"radius must be positive, got {radius}")
        self.radius = radius
        coords = dataset.coords
        rows: list[list[tuple[float, int]]] = []
        for i in range(len(dataset)):
            ids = index.range_ids(i, radius, stats)
            row = sorted((math.dist(coords[i], coords[j]), j) for j in ids)
            rows.append(row)
        self._rows = rows
        self._dists = [[d for d, _ in row] for row in rows]

    def __len__(self) -> int:
        return len(self._rows)

    def neighbors(self, i: int, radius: float | None = None) -> list[int]:
        """Ids within ``radius`` of point i (defaults to the table radius)."""
        row = self._rows[i]
        if radius is None or radius >= self.radius:
            return [j for _, j in row]
        cut = bisect_right(self._dists[i], radius)
        return [j for _, j in row[:cut]]

    def neighbor_dists(self, i: int) -> list[tuple[float, int]]:
        return self._rows[i]

    def count(self, i: int, radius: float | None = None) -> int:
        if radius is None or radius >= self.radius:
            return len(self._rows[i])
        return bisect_right(self._dists[i], radius)

    def kth_distance(self, i: int, k: int) -> float:
        """k-th smallest neighbor distance of point i, inf when the
        neighborhood holds fewer than k points."""
        ds = self._dists[i]
        if len(ds) < k:
            return math.inf
        return ds[k - 1]
