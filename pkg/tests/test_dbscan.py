import numpy as np
import pytest

from denseclust import (
    NOISE,
    Dataset,
    DensityParams,
    PointClass,
    build,
    classify_points,
    dbscan,
)

from conftest import random_dataset, random_params
from oracles import oracle_classify, oracle_connectivity, oracle_dbscan


def test_two_blobs_two_clusters_no_noise(blob_pair):
    # internal spacing 1, blob separation 36, radius twice the spacing
    params = DensityParams(radius=2.0, min_pts=4)
    ix = build(blob_pair, "tree")
    got = dbscan(blob_pair, params, ix)
    expected = oracle_dbscan(blob_pair.coords, 2.0, 4)
    assert list(got.labels) == expected
    assert got.cluster_count == 2
    assert got.noise_count == 0


def test_scattered_points_all_noise():
    d = Dataset.from_coords([(0, 0), (10, 0), (0, 10), (10, 10)])
    ix = build(d, "tree")
    got = dbscan(d, DensityParams(radius=1.0, min_pts=2), ix)
    assert all(x == NOISE for x in got.labels)


def test_classify_collinear_window():
    d = Dataset.from_coords([(float(i), 0.0) for i in range(5)])
    ix = build(d, "tree")
    tags = classify_points(d, DensityParams(radius=1.1, min_pts=3), ix)
    assert tags == (
        PointClass.BORDER,
        PointClass.CORE,
        PointClass.CORE,
        PointClass.CORE,
        PointClass.BORDER,
    )


def test_classify_isolated_is_noise():
    d = Dataset.from_coords([(0, 0), (0.5, 0), (50, 50)])
    ix = build(d, "tree")
    tags = classify_points(d, DensityParams(radius=1.0, min_pts=2), ix)
    assert tags[2] is PointClass.NOISE


def test_classification_partition_sums():
    for seed in range(100):
        d = random_dataset(seed, max_n=120)
        radius, min_pts = random_params(seed, d.coords)
        ix = build(d, "tree")
        tags = classify_points(d, DensityParams(radius, min_pts), ix)
        assert len(tags) == len(d)
        counts = {t: sum(1 for x in tags if x is t) for t in PointClass}
        assert sum(counts.values()) == len(d)
        assert tags == tuple(
            PointClass(t) for t in oracle_classify(d.coords, radius, min_pts)
        )


def test_oracle_equivalence_small_sweep():
    for seed in range(40):
        d = random_dataset(seed, max_n=150)
        radius, min_pts = random_params(seed, d.coords)
        ix = build(d, "tree")
        got = dbscan(d, DensityParams(radius, min_pts), ix)
        assert list(got.labels) == oracle_dbscan(d.coords, radius, min_pts)


def test_traversal_determinism():
    d = random_dataset(123)
    radius, min_pts = random_params(123, d.coords)
    params = DensityParams(radius, min_pts)
    runs = {dbscan(d, params, build(d, "tree")).labels for _ in range(3)}
    assert len(runs) == 1


def test_monotone_noise_in_min_pts():
    for seed in range(25):
        d = random_dataset(seed, max_n=150)
        radius, _ = random_params(seed, d.coords)
        ix = build(d, "tree")
        prev = -1
        for mp in (2, 3, 5, 8, 13):
            lab = dbscan(d, DensityParams(radius, mp), ix)
            assert lab.noise_count >= prev
            prev = lab.noise_count


def test_min_pts_one_is_pure_connectivity():
    for seed in (3, 17, 44):
        d = random_dataset(seed, max_n=100)
        radius, _ = random_params(seed, d.coords)
        lab = dbscan(d, DensityParams(radius, 1), build(d, "tree"))
        comp = oracle_connectivity(d.coords, radius)
        assert lab.noise_count == 0
        # same partition up to renumbering
        pairs = {(a, b) for a, b in zip(lab.labels, comp)}
        assert len(pairs) == lab.cluster_count


def test_clusters_are_density_connected():
    # every pair in one cluster is linked through core points (BFS check)
    d = random_dataset(9, max_n=80)
    radius, min_pts = random_params(9, d.coords)
    ix = build(d, "tree")
    lab = dbscan(d, DensityParams(radius, min_pts), ix)
    tags = classify_points(d, DensityParams(radius, min_pts), ix)
    from collections import deque

    for cid in range(lab.cluster_count):
        members = [i for i, x in enumerate(lab.labels) if x == cid]
        cores = [i for i in members if tags[i] is PointClass.CORE]
        assert cores, "a cluster must contain at least one core point"
        seen = {cores[0]}
        queue = deque([cores[0]])
        while queue:
            p = queue.popleft()
            for q in ix.range_ids(p, radius):
                if q in members and q not in seen and tags[p] is PointClass.CORE:
                    seen.add(q)
                    queue.append(q)
        assert seen == set(members)


def test_duplicate_points_cluster_together():
    d = Dataset.from_coords([(1, 1), (1, 1), (1, 1), (9, 9)])
    lab = dbscan(d, DensityParams(radius=0.5, min_pts=3), build(d, "tree"))
    assert lab.labels[0] == lab.labels[1] == lab.labels[2] >= 0
    assert lab.labels[3] == NOISE
