"""External validation of clusterings against ground truth.

The adjusted Rand index treats noise (-1) as one extra class on each
side: how well an algorithm isolates the actual noise points is part of
what is being scored, so noise agreement must count.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

from .core import Labeling
from .errors import ParameterError, UndefinedResultError, UnfinishedLabelingError


@dataclass(frozen=True)
class Score:
    """Summary of one clustering run; ``ari`` is None without ground truth."""

    ari: float | None
    cluster_count: int
    noise_count: int
    cluster_sizes: tuple[int, ...]


def _as_labels(x) -> Sequence[int]:
    if isinstance(x, Labeling):
        if not x.is_finished():
            raise UnfinishedLabelingError("labeling contains unclassified points")
        return x.labels
    return [int(v) for v in x]


def adjusted_rand_index(pred, truth) -> float:
    """Pair-counting ARI between two label sequences.

    Accepts a Labeling or any integer sequence on either side; -1 marks
    noise and forms its own class. Identical partitions (up to
    relabeling) score 1.0; the index is 0 in expectation for independent
    random partitions and can be negative.
    """
    a = _as_labels(pred)
    b = _as_labels(truth)
    if len(a) != len(b):
        raise ParameterError(f"label sequences have lengths {len(a)} and {len(b)}")
    n = len(a)
    if n == 0:
        raise UndefinedResultError("ARI is undefined for empty labelings")
    contingency = Counter(zip(a, b))
    row = Counter(a)
    col = Counter(b)
    sum_cells = sum(comb(c, 2) for c in contingency.values())
    sum_rows = sum(comb(c, 2) for c in row.values())
    sum_cols = sum(comb(c, 2) for c in col.values())
    total = comb(n, 2)
    if total == 0:
        return 1.0
    expected = sum_rows * sum_cols / total
    maximum = (sum_rows + sum_cols) / 2.0
    if maximum == expected:
        return 1.0  # both partitions trivial and identical in structure
    return (sum_cells - expected) / (maximum - expected)


def summarize(l: Labeling) -> Score:
    """Counts and sizes of a finished labeling (no ARI)."""
    if not l.is_finished():
        raise UnfinishedLabelingError("labeling contains unclassified points")
    return Score(
        ari=None,
        cluster_count=l.cluster_count,
        noise_count=l.noise_count,
        cluster_sizes=l.cluster_sizes,
    )


def score_against_truth(l: Labeling, truth: Sequence[int]) -> Score:
    s = summarize(l)
    return Score(
        ari=adjusted_rand_index(l, truth),
        cluster_count=s.cluster_count,
        noise_count=s.noise_count,
        cluster_sizes=s.cluster_sizes,
    )


def core_restricted_agreement(a: Labeling, b: Labeling, core: Iterable[int]) -> float:
    """ARI computed over core points only.

    Used to compare algorithms whose border-point assignments may
    legitimately differ while core-point co-membership must match.
    """
    ids = sorted(set(core))
    if not ids:
        raise UndefinedResultError("core set is empty")
    la = _as_labels(a)
    lb = _as_labels(b)
    if len(la) != len(lb):
        raise ParameterError(f"labelings have lengths {len(la)} and {len(lb)}")
    return adjusted_rand_index([la[i] for i in ids], [lb[i] for i in ids])
