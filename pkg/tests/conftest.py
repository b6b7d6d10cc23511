"""Shared dataset builders for the test suite."""

from __future__ import annotations

import math

import numpy as np
import pytest

from denseclust import Dataset
from denseclust.datasets import _jittered_region


def random_dataset(seed: int, max_n: int = 300) -> Dataset:
    """Random mix of uniform background and Gaussian clumps, occasionally
    with duplicated points. Used for oracle-equivalence sweeps."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(20, max_n + 1))
    parts = []
    k = int(rng.integers(0, 4))
    left = n
    for _ in range(k):
        m = int(rng.integers(5, max(6, left // 2 + 1)))
        left -= m
        center = rng.uniform(-10, 10, 2)
        parts.append(rng.normal(center, rng.uniform(0.2, 1.5), (m, 2)))
        if left <= 0:
            break
    if left > 0:
        parts.append(rng.uniform(-12, 12, (max(left, 1), 2)))
    coords = np.vstack(parts)[:n]
    if rng.random() < 0.3 and len(coords) > 4:
        coords[1] = coords[0]  # duplicates are legal: distance-0 points
    rng.shuffle(coords)
    return Dataset.from_coords(coords.tolist())


def random_params(seed: int, coords) -> tuple[float, int]:
    rng = np.random.default_rng(seed + 10_000)
    arr = np.asarray(coords)
    sample = arr[rng.integers(0, len(arr), 40)]
    d = np.hypot(
        sample[:, None, 0] - arr[None, :, 0], sample[:, None, 1] - arr[None, :, 1]
    )
    d = d[d > 0]
    radius = float(np.quantile(d, rng.uniform(0.02, 0.15)))
    return max(radius, 1e-6), int(rng.integers(2, 9))


def lattice_blob(count: int = 150, spacing: float = 1.0, seed: int = 5) -> Dataset:
    """Single uniform-density blob: a jittered lattice disk."""
    rng = np.random.default_rng(seed)
    pts, _ = _jittered_region(rng, (0.0, 0.0), spacing, count, 0.15)
    return Dataset.from_coords(pts.tolist())


def two_density_dataset(seed: int = 77):
    """Tight blob (spacing 0.1) and a four-point loose blob (spacing 1.0)
    separated by 10. The loose points' 4th-nearest other point lies
    across the separation, so the k=4 distance graph jumps there."""
    rng = np.random.default_rng(seed)
    tight, _ = _jittered_region(rng, (0.0, 0.0), 0.1, 60, 0.15)
    loose = np.array([[0, 0], [1, 0], [0, 1], [1, 1]], dtype=float)
    loose += rng.uniform(-0.12, 0.12, (4, 2))
    tr = float(np.hypot(tight[:, 0], tight[:, 1]).max())
    loose += np.array([tr + 10.0, 0.0])
    coords = np.vstack([tight, loose])
    tight_ids = set(range(60))
    return Dataset.from_coords(coords.tolist()), tight_ids


@pytest.fixture
def blob_pair() -> Dataset:
    """Two 20-point lattice blobs far apart relative to their spacing."""
    rows = []
    for cx in (0.0, 40.0):
        rows += [(cx + i, float(j)) for i in range(4) for j in range(5)]
    return Dataset.from_coords(rows)
