"""Independent brute-force reference implementations, used only by tests.

Everything here is straight-line quadratic code over raw coordinate
tuples: no spatial index, no shared algorithm code. When an equivalence
test fails, the defect is in the index or the algorithm under test, not
here.

Numeric conventions match the library's contracts: neighborhood
membership is decided on squared distances (``d2 <= r*r``), pairwise
distances for reachability use ``math.dist``.
"""

from __future__ import annotations

import math
from collections import deque

NOISE = -1
UNCLASSIFIED = -2


def _sq(a, b) -> float:
    s = 0.0
    for x, y in zip(a, b):
        d = x - y
        s += d * d
    return s


def brute_neighborhoods(coords, radius) -> list[list[int]]:
    r2 = radius * radius
    n = len(coords)
    return [
        [j for j in range(n) if _sq(coords[i], coords[j]) <= r2] for i in range(n)
    ]


def oracle_dbscan(coords, radius, min_pts) -> list[int]:
    """All-pairs DBSCAN with the pinned traversal (ascending seeds, BFS,
    first-reaching cluster claims border points)."""
    nbrs = brute_neighborhoods(coords, radius)
    n = len(coords)
    core = [len(nbrs[i]) >= min_pts for i in range(n)]
    labels = [UNCLASSIFIED] * n
    cid = 0
    for s in range(n):
        if labels[s] != UNCLASSIFIED:
            continue
        if not core[s]:
            labels[s] = NOISE
            continue
        labels[s] = cid
        queue = deque([s])
        while queue:
            p = queue.popleft()
            for q in nbrs[p]:
                if labels[q] in (UNCLASSIFIED, NOISE):
                    labels[q] = cid
                    if core[q]:
                        queue.append(q)
        cid += 1
    return labels


def oracle_classify(coords, radius, min_pts) -> list[str]:
    nbrs = brute_neighborhoods(coords, radius)
    core = [len(nb) >= min_pts for nb in nbrs]
    out = []
    for i in range(len(coords)):
        if core[i]:
            out.append("core")
        elif any(core[q] for q in nbrs[i]):
            out.append("border")
        else:
            out.append("noise")
    return out


def oracle_optics(coords, radius, min_pts):
    """Priority-queue-free OPTICS: each step scans all unprocessed points
    for the smallest reachability (ties by id). Returns a list of
    (point_id, core_distance, reachability) in processing order."""
    n = len(coords)
    nbrs = brute_neighborhoods(coords, radius)
    coredist = []
    for i in range(n):
        ds = sorted(math.dist(coords[i], coords[j]) for j in nbrs[i])
        coredist.append(ds[min_pts - 1] if len(ds) >= min_pts else math.inf)
    reach = [math.inf] * n
    processed = [False] * n
    out = []

    def expand(p):
        if coredist[p] == math.inf:
            return
        for q in nbrs[p]:
            if processed[q]:
                continue
            r = max(coredist[p], math.dist(coords[p], coords[q]))
            if r < reach[q]:
                reach[q] = r

    while len(out) < n:
        best_r, best_q = math.inf, None
        for q in range(n):
            if not processed[q] and reach[q] < best_r:
                best_r, best_q = reach[q], q
        if best_q is None:
            best_q = next(q for q in range(n) if not processed[q])
        processed[best_q] = True
        out.append((best_q, coredist[best_q], reach[best_q]))
        expand(best_q)
    return out


def oracle_connectivity(coords, radius) -> list[int]:
    """Connected components over <= radius edges; every point gets a
    component id, singletons included."""
    n = len(coords)
    r2 = radius * radius
    labels = [UNCLASSIFIED] * n
    cid = 0
    for s in range(n):
        if labels[s] != UNCLASSIFIED:
            continue
        labels[s] = cid
        queue = deque([s])
        while queue:
            p = queue.popleft()
            for q in range(n):
                if labels[q] == UNCLASSIFIED and _sq(coords[p], coords[q]) <= r2:
                    labels[q] = cid
                    queue.append(q)
        cid += 1
    return labels


def oracle_ari(a, b) -> float:
    """Exhaustive pair-counting adjusted Rand index."""
    n = len(a)
    assert len(b) == n
    n11 = n10 = n01 = n00 = 0
    for i in range(n):
        for j in range(i + 1, n):
            sa = a[i] == a[j]
            sb = b[i] == b[j]
            if sa and sb:
                n11 += 1
            elif sa:
                n10 += 1
            elif sb:
                n01 += 1
            else:
                n00 += 1
    total = n11 + n10 + n01 + n00
    if total == 0:
        return 1.0
    sum_rows = n11 + n10
    sum_cols = n11 + n01
    expected = sum_rows * sum_cols / total
    maximum = (sum_rows + sum_cols) / 2.0
    if maximum == expected:
        return 1.0
    return (n11 - expected) / (maximum - expected)
