"""Command-line front end.

Subcommands: ``gen`` (synthesize a scenario dataset), ``cluster`` (run one
algorithm over a file), ``compare`` (scenario x algorithm matrix),
``scaling`` (runtime scaling benchmark), ``plotdata`` (reachability /
k-distance exports).

Exit codes: 0 success, 2 usage (bad flags), 3 invalid or missing
parameter, 4 file parse or dataset validation failure, 5 I/O failure.

Every data artifact written by a command is byte-deterministic for fixed
flags and seeds. Wall-clock timing is inherently volatile, so it goes to
stdout and to the dedicated timings file of ``scaling``, never into the
deterministic outputs.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from importlib import resources
from pathlib import Path

from . import __version__
from .core import Dataset, DensityParams, Labeling
from .datasets import GenSpec, Shape, generate, load, save, _coord_names
from .dbscan import dbscan
from .endbscan import EnParams, endbscan
from .errors import (
    DatasetValidationError,
    DenseclustError,
    NoKneeError,
    ParameterError,
    ParseError,
)
from .index import QueryStats, Strategy, build
from .kdvariant import estimate_radius, k_distance_graph, kdvariant_cluster_with_trace, VariantParams
from .metrics import adjusted_rand_index
from .ndiff import NDiffParams, drop_small_clusters, ndiff_cluster
from .optics import (
    extract_clusters,
    extract_clusters_multi,
    optics_order,
    reachability_plot,
)
from . import bench

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARAMETER = 3
EXIT_PARSE = 4
EXIT_IO = 5


def _write_text(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def _require(args, names: list[str]) -> None:
    missing = [n for n in names if getattr(args, n.replace("-", "_")) is None]
    if missing:
        flags = ", ".join("--" + n for n in missing)
        raise ParameterError(f"--algo {args.algo} requires {flags}")


def _generous_radius(d: Dataset) -> float:
    """Bounding-box diagonal: a radius that sees the whole dataset."""
    if len(d) == 0:
        return 1.0
    lo = [min(p.coords[k] for p in d.points) for k in range(d.dimension)]
    hi = [max(p.coords[k] for p in d.points) for k in range(d.dimension)]
    diag = math.dist(lo, hi)
    return diag if diag > 0 else 1.0


def _labels_csv(d: Dataset, labeling: Labeling) -> str:
    names = _coord_names(d.dimension)
    lines = ["point_id," + ",".join(names) + ",cluster"]
    for p in d.points:
        coords = ",".join(repr(c) for c in p.coords)
        lines.append(f"{p.id},{coords},{labeling.labels[p.id]}")
    return "\n".join(lines) + "\n"


def cmd_gen(args) -> int:
    spec = GenSpec(
        shape=Shape(args.shape),
        n=args.n,
        seed=args.seed,
        blob_count=args.blob_count,
        density_ratio=args.density_ratio,
        noise_rate=args.noise_rate,
        jitter=args.jitter,
    )
    d = generate(spec)
    save(d, args.output)
    print(f"shape={args.shape} n={len(d)} seed={args.seed} output={args.output}")
    return EXIT_OK


def _run_algorithm(args, d: Dataset, stats: QueryStats):
    ix = build(d, Strategy(args.strategy))
    algo = args.algo
    extras: dict[str, str] = {}
    if algo == "dbscan":
        _require(args, ["eps", "minpts"])
        labeling = dbscan(d, DensityParams(args.eps, args.minpts), ix, stats)
    elif algo == "optics":
        _require(args, ["minpts"])
        radius = args.eps if args.eps is not None else _generous_radius(d)
        ordering = optics_order(d, DensityParams(radius, args.minpts), ix, stats)
        extras["ordering_radius"] = repr(radius)
        if args.eps_prime is None:
            labeling = extract_clusters(ordering, radius)
            extras["eps_prime"] = repr(radius)
        else:
            thresholds = [float(t) for t in args.eps_prime.split("+")]
            if len(thresholds) == 1:
                labeling = extract_clusters(ordering, thresholds[0])
            else:
                labeling = extract_clusters_multi(ordering, thresholds)
            extras["eps_prime"] = args.eps_prime
    elif algo == "endbscan":
        _require(args, ["eps", "minpts", "beta"])
        params = EnParams(args.eps, args.minpts, args.beta, mode=args.mode)
        labeling = endbscan(d, params, ix, stats)
    elif algo == "kdvariant":
        _require(args, ["minpts", "alpha"])
        params = VariantParams(min_pts=args.minpts, alpha=args.alpha)
        labeling, _, radius = kdvariant_cluster_with_trace(
            d, params, ix, radius=args.eps, stats=stats
        )
        extras["eps"] = repr(radius)
    elif algo == "ndiff":
        _require(args, ["eps", "delta"])
        labeling = ndiff_cluster(d, NDiffParams(args.eps, args.delta), ix, stats)
        if args.min_cluster_size is not None:
            labeling = drop_small_clusters(labeling, args.min_cluster_size)
            extras["min_cluster_size"] = str(args.min_cluster_size)
    else:
        raise ParameterError(f"unknown algorithm {algo!r}")
    return labeling, extras


def cmd_cluster(args) -> int:
    d = load(args.input, format=args.format)
    stats = QueryStats()
    t0 = time.perf_counter()
    labeling, extras = _run_algorithm(args, d, stats)
    wall_ms = (time.perf_counter() - t0) * 1000.0
    _write_text(args.output, _labels_csv(d, labeling))
    report = {
        "algorithm": args.algo,
        "n": str(len(d)),
        "strategy": args.strategy,
        **extras,
        "clusters": str(labeling.cluster_count),
        "noise": str(labeling.noise_count),
        "range_queries": str(stats.range_queries),
        "knn_queries": str(stats.knn_queries),
        "node_visits": str(stats.node_visits),
        "output": str(args.output),
    }
    if d.truth is not None:
        report["ari"] = f"{adjusted_rand_index(labeling, d.truth):.6f}"
    lines = [f"{k}={v}" for k, v in report.items()]
    print("\n".join(lines))
    print(f"wall_ms={wall_ms:.3f}")
    if args.report:
        _write_text(args.report, "\n".join(lines) + f"\nwall_ms={wall_ms:.3f}\n")
    return EXIT_OK


def cmd_compare(args) -> int:
    if args.config:
        text = Path(args.config).read_text(encoding="utf-8")
    else:
        text = (
            resources.files("denseclust").joinpath("data/compare_default.cfg")
        ).read_text(encoding="utf-8")
    sections = bench.parse_config(text)
    cells = bench.run_compare(sections, Strategy(args.strategy))
    print(bench.format_matrix(cells))
    if args.output:
        _write_text(args.output, bench.cells_tsv(cells))
        print(f"output={args.output}")
    failed = [c for c in cells if c.passed is False]
    if failed:
        for c in failed:
            print(
                f"below expectation: {c.scenario}/{c.algorithm} "
                f"ari={c.best_ari:.3f} < {c.expected_min:.3f}"
            )
        return 1
    return EXIT_OK


def cmd_scaling(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s]
    report = bench.run_scaling(
        sizes,
        reps=args.reps,
        eps=args.eps,
        min_pts=args.minpts,
        seed=args.seed,
    )
    _write_text(args.output, bench.scaling_counters_tsv(report))
    if args.timings:
        _write_text(args.timings, bench.scaling_timings_tsv(report))
    for (algo, strat), e in report.exponents.items():
        print(f"exponent {algo}/{strat} = {e:.3f}")
    for r in report.rows:
        print(
            f"{r.algorithm}/{r.strategy} n={r.n} median_s={r.median_time:.4f} "
            f"build_s={r.build_time:.4f}"
        )
    print(f"output={args.output}")
    return EXIT_OK


def cmd_plotdata(args) -> int:
    d = load(args.input, format=args.format)
    ix = build(d, Strategy(args.strategy))
    if args.kind == "reachability":
        if args.minpts is None:
            raise ParameterError("--kind reachability requires --minpts")
        radius = args.eps if args.eps is not None else _generous_radius(d)
        ordering = optics_order(d, DensityParams(radius, args.minpts), ix)
        rows = ["order_index\tpoint_id\treachability\tcore_distance"]
        for idx, pid, reach, cd in reachability_plot(ordering):
            rows.append(f"{idx}\t{pid}\t{repr(reach)}\t{repr(cd)}")
        _write_text(args.output, "\n".join(rows) + "\n")
    else:
        if args.k is None:
            raise ParameterError("--kind kdistance requires --k")
        g = k_distance_graph(d, args.k, ix)
        rows = ["rank\tpoint_id\tk_distance\tderivative"]
        for rank, pid in enumerate(g.order):
            deriv = (
                repr(g.first_derivative[rank])
                if rank < len(g.first_derivative)
                else ""
            )
            rows.append(f"{rank}\t{pid}\t{repr(g.sorted_distances[rank])}\t{deriv}")
        _write_text(args.output, "\n".join(rows) + "\n")
    print(f"kind={args.kind} n={len(d)} output={args.output}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="denseclust",
        description="Density-based clustering algorithms and benchmarks.",
        epilog=(
            "exit codes: 0 ok, 2 usage, 3 bad/missing parameter, "
            "4 parse/validation, 5 I/O"
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a synthetic scenario dataset")
    g.add_argument("--shape", required=True, choices=[s.value for s in Shape])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--output", required=True)
    g.add_argument("--blob-count", type=int, default=3)
    g.add_argument("--density-ratio", type=float, default=None)
    g.add_argument("--noise-rate", type=float, default=None)
    g.add_argument("--jitter", type=float, default=0.17)
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("cluster", help="cluster a dataset file")
    c.add_argument(
        "--algo",
        required=True,
        choices=["dbscan", "optics", "endbscan", "kdvariant", "ndiff"],
    )
    c.add_argument("--input", required=True)
    c.add_argument("--output", required=True)
    c.add_argument("--format", choices=["csv", "arff"], default=None)
    c.add_argument("--strategy", choices=["tree", "linear"], default="tree")
    c.add_argument("--eps", type=float, default=None, help="neighborhood radius")
    c.add_argument("--minpts", type=int, default=None)
    c.add_argument("--beta", type=float, default=None, help="endbscan variance factor")
    c.add_argument("--mode", choices=["seed", "chain"], default="seed")
    c.add_argument("--alpha", type=int, default=None, help="kdvariant tolerance")
    c.add_argument("--delta", type=int, default=None, help="ndiff tolerance")
    c.add_argument(
        "--eps-prime",
        default=None,
        help="optics extraction threshold(s); join multiple with '+'",
    )
    c.add_argument("--min-cluster-size", type=int, default=None)
    c.add_argument("--report", default=None, help="also write the run report here")
    c.set_defaults(func=cmd_cluster)

    m = sub.add_parser("compare", help="scenario x algorithm comparison matrix")
    m.add_argument("--config", default=None, help="grid config (default: shipped)")
    m.add_argument("--output", default=None, help="matrix TSV path")
    m.add_argument("--strategy", choices=["tree", "linear"], default="tree")
    m.set_defaults(func=cmd_compare)

    s = sub.add_parser("scaling", help="runtime scaling benchmark")
    s.add_argument("--sizes", default="1000,2000,4000,8000,16000")
    s.add_argument("--reps", type=int, default=3)
    s.add_argument("--eps", type=float, default=1.8)
    s.add_argument("--minpts", type=int, default=5)
    s.add_argument("--seed", type=int, default=100)
    s.add_argument("--output", required=True, help="deterministic counters TSV")
    s.add_argument("--timings", default=None, help="volatile wall-time TSV")
    s.set_defaults(func=cmd_scaling)

    p = sub.add_parser("plotdata", help="export reachability / k-distance data")
    p.add_argument("--kind", required=True, choices=["reachability", "kdistance"])
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--format", choices=["csv", "arff"], default=None)
    p.add_argument("--strategy", choices=["tree", "linear"], default="tree")
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--minpts", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.set_defaults(func=cmd_plotdata)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, DatasetValidationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (ParameterError, NoKneeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARAMETER
    except DenseclustError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARAMETER
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
