"""Core data model: points, datasets, labelings and the shared distance.

Conventions used throughout the package:

* The neighborhood of a point is boundary-inclusive (``dist <= radius``)
  and contains the point itself, so ``min_pts`` counts the center point.
  This shifts the effective ``min_pts`` by one versus conventions that
  count only other points.
* Labels are plain integers: cluster ids ``0..k-1``, ``NOISE`` (-1) for
  points outside every cluster, ``UNCLASSIFIED`` (-2) only while an
  algorithm is still running. Files always serialize noise as ``-1``.
* All types are immutable after construction and safe to share across
  threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import (
    DatasetValidationError,
    DimensionMismatchError,
    NonFiniteCoordinateError,
    ParameterError,
    TruthLengthError,
    UnfinishedLabelingError,
)

NOISE = -1
UNCLASSIFIED = -2


@dataclass(frozen=True)
class Point:
    """A dataset point: its index and a fixed-length coordinate tuple."""

    id: int
    coords: tuple[float, ...]


def distance(a: Point, b: Point) -> float:
    """Euclidean distance between two points of equal dimension.

    Euclidean is the single metric of the package; the spatial index and
    every algorithm rely on it being the same everywhere.
    """
    if len(a.coords) != len(b.coords):
        raise DimensionMismatchError(
            f"points have dimensions {len(a.coords)} and {len(b.coords)}"
        )
    return math.dist(a.coords, b.coords)


@dataclass(frozen=True)
class Dataset:
    """Ordered collection of points with optional ground-truth labels.

    ``truth`` uses cluster ids >= 0 and -1 for noise.
    """

    dimension: int
    points: tuple[Point, ...]
    truth: tuple[int, ...] | None = None

    def __len__(self) -> int:
        return len(self.points)

    @cached_property
    def coords(self) -> tuple[tuple[float, ...], ...]:
        """Raw coordinate tuples, the hot path for the algorithms."""
        return tuple(p.coords for p in self.points)

    @classmethod
    def from_coords(
        cls,
        coords: Iterable[Sequence[float]],
        truth: Sequence[int] | None = None,
        dimension: int | None = None,
    ) -> "Dataset":
        """Build a dataset from raw coordinate rows, assigning ids 0..n-1."""
        pts = tuple(
            Point(i, tuple(float(c) for c in row)) for i, row in enumerate(coords)
        )
        if dimension is None:
            dimension = len(pts[0].coords) if pts else 2
        t = tuple(int(x) for x in truth) if truth is not None else None
        return validate(cls(dimension=dimension, points=pts, truth=t))


def validate(d: Dataset) -> Dataset:
    """Check every dataset invariant, returning the dataset unchanged.

    Raises a distinct error per defect so callers can report precisely:
    ragged dimensions, non-finite coordinates, bad ids, truth-length
    mismatch.
    """
    if d.dimension < 1:
        raise DatasetValidationError(f"dimension must be positive, got {d.dimension}")
    for i, p in enumerate(d.points):
        if p.id != i:
            raise DatasetValidationError(f"point at position {i} has id {p.id}")
        if len(p.coords) != d.dimension:
            raise DimensionMismatchError(
                f"point {i} has {len(p.coords)} coordinates, dataset is "
                f"{d.dimension}-dimensional"
            )
        for c in p.coords:
            if not math.isfinite(c):
                raise NonFiniteCoordinateError(f"point {i} has coordinate {c!r}")
    if d.truth is not None and len(d.truth) != len(d.points):
        raise TruthLengthError(
            f"truth has {len(d.truth)} labels for {len(d.points)} points"
        )
    return d


@dataclass(frozen=True)
class Labeling:
    """Per-point cluster assignment produced by a clustering run.

    Cluster ids may be arbitrary non-negative integers on input;
    :func:`canonicalize` renumbers them to the contiguous range
    ``0..cluster_count-1``, which every algorithm in this package
    already produces.
    """

    labels: tuple[int, ...]

    def __post_init__(self):
        bad = [x for x in self.labels if x < UNCLASSIFIED]
        if bad:
            raise ParameterError(f"invalid label values: {sorted(set(bad))}")

    def __len__(self) -> int:
        return len(self.labels)

    @cached_property
    def cluster_count(self) -> int:
        return len({x for x in self.labels if x >= 0})

    @cached_property
    def noise_count(self) -> int:
        return sum(1 for x in self.labels if x == NOISE)

    @cached_property
    def cluster_sizes(self) -> tuple[int, ...]:
        """Sizes ordered by ascending cluster id."""
        ids = sorted({x for x in self.labels if x >= 0})
        pos = {v: i for i, v in enumerate(ids)}
        sizes = [0] * len(ids)
        for x in self.labels:
            if x >= 0:
                sizes[pos[x]] += 1
        return tuple(sizes)

    def is_finished(self) -> bool:
        return UNCLASSIFIED not in self.labels


def canonicalize(l: Labeling) -> Labeling:
    """Renumber cluster ids by order of first appearance.

    Noise is preserved, the partition is unchanged, and the operation is
    idempotent, which makes labelings comparable across algorithms.
    """
    if not l.is_finished():
        raise UnfinishedLabelingError("labeling contains unclassified points")
    mapping: dict[int, int] = {}
    out = []
    for x in l.labels:
        if x == NOISE:
            out.append(NOISE)
            continue
        if x not in mapping:
            mapping[x] = len(mapping)
        out.append(mapping[x])
    return Labeling(tuple(out))


@dataclass(frozen=True)
class DensityParams:
    """Neighborhood radius and minimum population for a core point."""

    radius: float
    min_pts: int

    def __post_init__(self):
        if not (self.radius > 0) or not math.isfinite(self.radius):
            raise ParameterError(f"radius must be a positive real, got {self.radius}")
        if self.min_pts < 1:
            raise ParameterError(f"min_pts must be >= 1, got {self.min_pts}")
