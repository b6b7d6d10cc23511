"""Benchmark machinery behind the CLI: the scenario x algorithm
comparison matrix and the runtime scaling harness.

The comparison config is a line-oriented ``key = value`` file with
``[section]`` headers. ``[datasets]`` lists the scenarios; each
algorithm section lists grid values, space separated, e.g.::

    [dbscan]
    eps = 0.5 0.9 1.4
    minpts = 4 5 8

A section named ``[algo.scenario]`` overrides keys of ``[algo]`` for that
scenario only. The optics sections take ``eps`` (the ordering radius),
``minpts`` and ``eps_prime`` extraction thresholds; in ``[optics_multi]``
an ``eps_prime`` value may be a ``+``-joined set of thresholds applied as
one multi-level extraction. ``[expect]`` entries ``scenario.algo = 0.9``
attach a minimum best-ARI to a cell; cells without one report no status.

Every cell runs its full grid and reports the best ARI with the winning
grid point, so each number is reproducible from its own log line.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .core import Dataset, DensityParams, Labeling
from .datasets import GenSpec, Shape, generate
from .dbscan import dbscan_from_table
from .endbscan import EnParams, endbscan_from_table
from .errors import ParameterError, ParseError
from .index import NeighborTable, QueryStats, Strategy, build
from .kdvariant import estimate_radius, k_distance_graph, _gated_dbscan
from .metrics import adjusted_rand_index
from .ndiff import ndiff_from_table
from .optics import extract_clusters, extract_clusters_multi, optics_order_from_table

ALGORITHMS = ("dbscan", "optics", "optics_multi", "endbscan", "kdvariant", "ndiff")


def parse_config(text: str) -> dict[str, dict[str, list[str]]]:
    """Parse the line-oriented ``[section]`` / ``key = values`` format."""
    sections: dict[str, dict[str, list[str]]] = {}
    current: dict[str, list[str]] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip().lower()
            if not name:
                raise ParseError("empty section name", lineno)
            current = sections.setdefault(name, {})
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = values', got {line!r}", lineno)
        if current is None:
            raise ParseError("key outside any [section]", lineno)
        key, _, value = line.partition("=")
        tokens = value.split()
        if not tokens:
            raise ParseError(f"no values for key {key.strip()!r}", lineno)
        current[key.strip().lower()] = tokens
    return sections


def _floats(tokens: list[str]) -> list[float]:
    return [float(t) for t in tokens]


def _ints(tokens: list[str]) -> list[int]:
    return [int(t) for t in tokens]


def _scenario_specs(sections) -> list[tuple[str, GenSpec]]:
    ds = sections.get("datasets")
    if not ds:
        raise ParameterError("config has no [datasets] section")
    out = []
    for name, tokens in ds.items():
        kwargs: dict = {"shape": Shape(name)}
        for tok in tokens:
            if "=" not in tok:
                raise ParameterError(f"dataset option {tok!r} is not key=value")
            k, _, v = tok.partition("=")
            k = k.strip()
            if k in ("n", "seed", "blob_count"):
                kwargs[k] = int(v)
            elif k in ("noise_rate", "density_ratio", "jitter"):
                kwargs[k] = float(v)
            else:
                raise ParameterError(f"unknown dataset option {k!r}")
        out.append((name, GenSpec(**kwargs)))
    return out


def _grid_for(sections, algo: str, scenario: str) -> dict[str, list[str]] | None:
    base = sections.get(algo)
    override = sections.get(f"{algo}.{scenario}")
    if base is None and override is None:
        return None
    merged = dict(base or {})
    merged.update(override or {})
    return merged


@dataclass(frozen=True)
class Cell:
    """One (scenario, algorithm) comparison result."""

    scenario: str
    algorithm: str
    best_ari: float
    best_params: str
    cluster_count: int
    noise_count: int
    grid_size: int
    expected_min: float | None
    passed: bool | None


@dataclass
class _ScenarioContext:
    name: str
    dataset: Dataset
    index: object
    table: NeighborTable
    orderings: dict = field(default_factory=dict)

    def ordering(self, radius: float, min_pts: int):
        key = (radius, min_pts)
        if key not in self.orderings:
            self.orderings[key] = optics_order_from_table(
                self.table, DensityParams(radius=radius, min_pts=min_pts)
            )
        return self.orderings[key]

    def neighbors_at(self, radius: float) -> list[list[int]]:
        if radius <= self.table.radius:
            return [self.table.neighbors(i, radius) for i in range(len(self.table))]
        fresh = NeighborTable(self.dataset, self.index, radius)
        return [fresh.neighbors(i) for i in range(len(fresh))]


def _beta(tok: str) -> float:
    return math.inf if tok.lower() in ("inf", "infinity") else float(tok)


def _iter_grid(ctx: _ScenarioContext, algo: str, grid: dict[str, list[str]]):
    """Yield (params_string, labeling) over one algorithm grid."""
    table = ctx.table
    if algo == "dbscan":
        for eps in _floats(grid["eps"]):
            for mp in _ints(grid["minpts"]):
                yield f"eps={eps} minpts={mp}", dbscan_from_table(table, mp, eps)
    elif algo in ("optics", "optics_multi"):
        for eps in _floats(grid["eps"]):
            for mp in _ints(grid["minpts"]):
                o = ctx.ordering(eps, mp)
                for tok in grid["eps_prime"]:
                    if algo == "optics":
                        lab = extract_clusters(o, float(tok))
                    else:
                        lab = extract_clusters_multi(
                            o, [float(t) for t in tok.split("+")]
                        )
                    yield f"eps={eps} minpts={mp} eps_prime={tok}", lab
    elif algo == "endbscan":
        for eps in _floats(grid["eps"]):
            for mp in _ints(grid["minpts"]):
                for btok in grid["beta"]:
                    p = EnParams(radius=eps, min_pts=mp, beta=_beta(btok))
                    lab, _ = endbscan_from_table(table, p)
                    yield f"eps={eps} minpts={mp} beta={btok}", lab
    elif algo == "kdvariant":
        for mp in _ints(grid["minpts"]):
            if "eps" in grid:
                radii = _floats(grid["eps"])
            else:
                radii = [estimate_radius(k_distance_graph(ctx.dataset, mp, ctx.index))]
            for radius in radii:
                neighbors = ctx.neighbors_at(radius)
                for alpha in _ints(grid["alpha"]):
                    labels, _ = _gated_dbscan(neighbors, mp, alpha)
                    yield (
                        f"minpts={mp} alpha={alpha} eps={radius:.6g}",
                        Labeling(tuple(labels)),
                    )
    elif algo == "ndiff":
        for eps in _floats(grid["eps"]):
            for delta in _ints(grid["delta"]):
                lab, _ = ndiff_from_table(table, delta, eps)
                yield f"eps={eps} delta={delta}", lab
    else:
        raise ParameterError(f"unknown algorithm {algo!r}")


def _max_radius(sections, scenario: str) -> float:
    radii = []
    for algo in ALGORITHMS:
        grid = _grid_for(sections, algo, scenario)
        if grid and "eps" in grid:
            radii.extend(_floats(grid["eps"]))
    if not radii:
        raise ParameterError(f"no eps values configured for scenario {scenario!r}")
    return max(radii)


def run_compare(sections, strategy: Strategy = Strategy.TREE) -> list[Cell]:
    """Run the whole comparison matrix described by a parsed config."""
    expect = sections.get("expect", {})
    cells: list[Cell] = []
    for name, spec in _scenario_specs(sections):
        dataset = generate(spec)
        index = build(dataset, strategy)
        table = NeighborTable(dataset, index, _max_radius(sections, name))
        ctx = _ScenarioContext(name=name, dataset=dataset, index=index, table=table)
        for algo in ALGORITHMS:
            grid = _grid_for(sections, algo, name)
            if grid is None:
                continue
            best_ari, best_params, best_lab, count = -2.0, "", None, 0
            for params_str, lab in _iter_grid(ctx, algo, grid):
                count += 1
                ari = adjusted_rand_index(lab, dataset.truth)
                if ari > best_ari:
                    best_ari, best_params, best_lab = ari, params_str, lab
            if count == 0:
                raise ParameterError(f"empty grid for {algo} on {name}")
            exp_tok = expect.get(f"{name}.{algo}")
            exp = float(exp_tok[0]) if exp_tok else None
            cells.append(
                Cell(
                    scenario=name,
                    algorithm=algo,
                    best_ari=best_ari,
                    best_params=best_params,
                    cluster_count=best_lab.cluster_count,
                    noise_count=best_lab.noise_count,
                    grid_size=count,
                    expected_min=exp,
                    passed=None if exp is None else best_ari >= exp,
                )
            )
    return cells


def format_matrix(cells: list[Cell]) -> str:
    """Plain-text table of the comparison matrix."""
    scenarios = list(dict.fromkeys(c.scenario for c in cells))
    algos = list(dict.fromkeys(c.algorithm for c in cells))
    by = {(c.scenario, c.algorithm): c for c in cells}
    width = max(12, max(len(a) for a in algos) + 2)
    lines = ["scenario".ljust(12) + "".join(a.rjust(width) for a in algos)]
    for s in scenarios:
        row = [s.ljust(12)]
        for a in algos:
            c = by.get((s, a))
            if c is None:
                row.append("-".rjust(width))
            else:
                mark = "" if c.passed is None else (" ok" if c.passed else " !!")
                row.append(f"{c.best_ari:.3f}{mark}".rjust(width))
        lines.append("".join(row))
    return "\n".join(lines)


def cells_tsv(cells: list[Cell]) -> str:
    header = (
        "scenario\talgorithm\tbest_ari\tclusters\tnoise\tgrid_size"
        "\texpected_min\tstatus\tbest_params"
    )
    rows = [header]
    for c in cells:
        exp = "" if c.expected_min is None else f"{c.expected_min:.3f}"
        status = "" if c.passed is None else ("pass" if c.passed else "fail")
        rows.append(
            f"{c.scenario}\t{c.algorithm}\t{c.best_ari:.6f}\t{c.cluster_count}"
            f"\t{c.noise_count}\t{c.grid_size}\t{exp}\t{status}\t{c.best_params}"
        )
    return "\n".join(rows) + "\n"


# ---------------------------------------------------------------------------
# Scaling


@dataclass(frozen=True)
class ScalingRow:
    algorithm: str
    strategy: str
    n: int
    times: tuple[float, ...]  # seconds, one per repetition
    build_time: float
    range_queries: int
    node_visits: int

    @property
    def median_time(self) -> float:
        s = sorted(self.times)
        return s[len(s) // 2]


@dataclass(frozen=True)
class ScalingReport:
    rows: tuple[ScalingRow, ...]
    exponents: dict[tuple[str, str], float]


def uniform_dataset(n: int, seed: int) -> Dataset:
    """Unit-density uniform square: the side grows with sqrt(n), so the
    expected neighborhood population is size-independent."""
    rng = np.random.default_rng(seed)
    side = math.sqrt(n)
    return Dataset.from_coords(rng.uniform(0.0, side, (n, 2)).tolist())


def fit_exponent(ns: list[int], times: list[float]) -> float:
    """Least-squares slope of log(time) against log(n)."""
    xs = [math.log(n) for n in ns]
    ys = [math.log(t) for t in times]
    m = len(xs)
    sx, sy = sum(xs), sum(ys)
    sxx = sum(x * x for x in xs)
    sxy = sum(x * y for x, y in zip(xs, ys))
    return (m * sxy - sx * sy) / (m * sxx - sx * sx)


def run_scaling(
    sizes: list[int],
    reps: int = 3,
    eps: float = 1.8,
    min_pts: int = 5,
    arms: tuple[tuple[str, str], ...] = (
        ("dbscan", "tree"),
        ("dbscan", "linear"),
        ("optics", "tree"),
    ),
    seed: int = 100,
) -> ScalingReport:
    """Time the clustering arms over uniform data of growing size.

    Index build is timed separately and excluded from the fitted series;
    the reported time covers the neighborhood queries plus the algorithm
    itself, which is what the complexity claims are about.
    """
    if len(sizes) < 3:
        raise ParameterError("need at least 3 sizes to fit an exponent")
    if reps < 1:
        raise ParameterError("reps must be >= 1")
    rows: list[ScalingRow] = []
    for n in sizes:
        dataset = uniform_dataset(n, seed + n)
        for algo, strat in arms:
            t0 = time.perf_counter()
            index = build(dataset, Strategy(strat))
            build_time = time.perf_counter() - t0
            times = []
            stats = QueryStats()
            for rep in range(reps):
                stats.reset()
                t0 = time.perf_counter()
                table = NeighborTable(dataset, index, eps, stats)
                if algo == "dbscan":
                    dbscan_from_table(table, min_pts)
                elif algo == "optics":
                    o = optics_order_from_table(
                        table, DensityParams(radius=eps, min_pts=min_pts)
                    )
                    extract_clusters(o, eps)
                else:
                    raise ParameterError(f"unknown scaling algorithm {algo!r}")
                times.append(time.perf_counter() - t0)
            rows.append(
                ScalingRow(
                    algorithm=algo,
                    strategy=strat,
                    n=n,
                    times=tuple(times),
                    build_time=build_time,
                    range_queries=stats.range_queries,
                    node_visits=stats.node_visits,
                )
            )
    exponents = {}
    for algo, strat in arms:
        sel = [r for r in rows if r.algorithm == algo and r.strategy == strat]
        exponents[(algo, strat)] = fit_exponent(
            [r.n for r in sel], [r.median_time for r in sel]
        )
    return ScalingReport(rows=tuple(rows), exponents=exponents)


def scaling_counters_tsv(report: ScalingReport) -> str:
    """The deterministic part of a scaling run: per-size query counters."""
    lines = ["algorithm\tstrategy\tn\trange_queries\tnode_visits"]
    for r in report.rows:
        lines.append(
            f"{r.algorithm}\t{r.strategy}\t{r.n}\t{r.range_queries}\t{r.node_visits}"
        )
    return "\n".join(lines) + "\n"


def scaling_timings_tsv(report: ScalingReport) -> str:
    """Wall times and fitted exponents; volatile across runs by nature."""
    lines = ["algorithm\tstrategy\tn\tbuild_s\tmedian_s\truns_s"]
    for r in report.rows:
        runs = ",".join(f"{t:.6f}" for t in r.times)
        lines.append(
            f"{r.algorithm}\t{r.strategy}\t{r.n}\t{r.build_time:.6f}"
            f"\t{r.median_time:.6f}\t{runs}"
        )
    lines.append("")
    for (algo, strat), e in report.exponents.items():
        lines.append(f"# exponent {algo}/{strat} = {e:.3f}")
    return "\n".join(lines) + "\n"
