"""End-to-end CLI checks: exit codes and byte determinism of every data
artifact, each command run twice with identical flags."""

import subprocess
import sys
from pathlib import Path

import pytest

CONFIG = """
[datasets]
blobs = n=90 seed=4

[dbscan]
eps = 0.9 1.4
minpts = 4

[ndiff]
eps = 1.2
delta = 0 1000
"""


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "denseclust", *args],
        capture_output=True,
        text=True,
        timeout=300,
    )


def assert_deterministic(tmp_path, name, *args):
    outs = []
    for i in range(2):
        out = tmp_path / f"{name}_{i}"
        r = run_cli(*args, "--output", str(out))
        assert r.returncode == 0, r.stderr
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    return outs[0]


@pytest.fixture(scope="module")
def data_csv(tmp_path_factory):
    p = tmp_path_factory.mktemp("data") / "blobs.csv"
    r = run_cli(
        "gen", "--shape", "blobs", "--n", "90", "--seed", "4", "--output", str(p)
    )
    assert r.returncode == 0, r.stderr
    return p


def test_gen_deterministic(tmp_path):
    content = assert_deterministic(
        tmp_path, "gen", "gen", "--shape", "embedded", "--n", "120", "--seed", "7"
    )
    header = content.decode().splitlines()[0]
    assert header == "x,y,label"


def test_gen_below_minimum_exits_3(tmp_path):
    r = run_cli(
        "gen", "--shape", "blobs", "--n", "2", "--seed", "1",
        "--output", str(tmp_path / "x.csv"),
    )
    assert r.returncode == 3


def test_cluster_each_algorithm_deterministic(tmp_path, data_csv):
    flag_sets = {
        "dbscan": ["--eps", "1.2", "--minpts", "4"],
        "optics": ["--eps", "6.0", "--minpts", "4", "--eps-prime", "1.2"],
        "endbscan": ["--eps", "6.0", "--minpts", "8", "--beta", "inf"],
        "kdvariant": ["--minpts", "4", "--alpha", "1000"],
        "ndiff": ["--eps", "1.2", "--delta", "1000"],
    }
    for algo, flags in flag_sets.items():
        content = assert_deterministic(
            tmp_path,
            f"cluster_{algo}",
            "cluster",
            "--algo",
            algo,
            "--input",
            str(data_csv),
            *flags,
        )
        lines = content.decode().splitlines()
        assert lines[0] == "point_id,x,y,cluster"
        assert len(lines) == 91


def test_cluster_report_key_value_lines(tmp_path, data_csv):
    out = tmp_path / "lab.csv"
    r = run_cli(
        "cluster", "--algo", "dbscan", "--eps", "1.2", "--minpts", "4",
        "--input", str(data_csv), "--output", str(out),
    )
    assert r.returncode == 0
    report = dict(
        line.split("=", 1) for line in r.stdout.splitlines() if "=" in line
    )
    assert report["algorithm"] == "dbscan"
    assert report["n"] == "90"
    assert int(report["clusters"]) >= 1
    assert "ari" in report
    assert float(report["wall_ms"]) > 0


def test_cluster_missing_parameter_exits_3(tmp_path, data_csv):
    r = run_cli(
        "cluster", "--algo", "endbscan", "--eps", "1.0", "--minpts", "4",
        "--input", str(data_csv), "--output", str(tmp_path / "x.csv"),
    )
    assert r.returncode == 3
    assert "--beta" in r.stderr


def test_cluster_unknown_algorithm_exits_2(tmp_path, data_csv):
    r = run_cli(
        "cluster", "--algo", "kmeans", "--input", str(data_csv),
        "--output", str(tmp_path / "x.csv"),
    )
    assert r.returncode == 2


def test_cluster_unreadable_input_exits_5(tmp_path):
    r = run_cli(
        "cluster", "--algo", "dbscan", "--eps", "1", "--minpts", "3",
        "--input", str(tmp_path / "missing.csv"),
        "--output", str(tmp_path / "x.csv"),
    )
    assert r.returncode == 5


def test_cluster_malformed_input_exits_4(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("x,y\n1,zebra\n")
    r = run_cli(
        "cluster", "--algo", "dbscan", "--eps", "1", "--minpts", "3",
        "--input", str(bad), "--output", str(tmp_path / "x.csv"),
    )
    assert r.returncode == 4


def test_compare_deterministic(tmp_path):
    cfg = tmp_path / "tiny.cfg"
    cfg.write_text(CONFIG)
    content = assert_deterministic(
        tmp_path, "compare", "compare", "--config", str(cfg)
    )
    assert content.decode().splitlines()[0].startswith("scenario\talgorithm")


def test_compare_bad_config_exits_4(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("x = 1\n")
    r = run_cli("compare", "--config", str(cfg), "--output", str(tmp_path / "o.tsv"))
    assert r.returncode == 4


def test_scaling_counters_deterministic(tmp_path):
    content = assert_deterministic(
        tmp_path,
        "scaling",
        "scaling",
        "--sizes",
        "60,120,240",
        "--reps",
        "1",
    )
    lines = content.decode().splitlines()
    assert lines[0] == "algorithm\tstrategy\tn\trange_queries\tnode_visits"
    assert len(lines) == 10


def test_scaling_too_few_sizes_exits_3(tmp_path):
    r = run_cli(
        "scaling", "--sizes", "100,200", "--output", str(tmp_path / "s.tsv")
    )
    assert r.returncode == 3


def test_plotdata_reachability(tmp_path, data_csv):
    content = assert_deterministic(
        tmp_path,
        "reach",
        "plotdata",
        "--kind",
        "reachability",
        "--input",
        str(data_csv),
        "--minpts",
        "4",
        "--eps",
        "6.0",
    )
    lines = content.decode().splitlines()
    assert lines[0] == "order_index\tpoint_id\treachability\tcore_distance"
    assert len(lines) == 91
    assert lines[1].split("\t")[2] == "inf"


def test_plotdata_kdistance_recomputable(tmp_path, data_csv):
    content = assert_deterministic(
        tmp_path,
        "kdist",
        "plotdata",
        "--kind",
        "kdistance",
        "--input",
        str(data_csv),
        "--k",
        "4",
    )
    lines = content.decode().splitlines()
    assert lines[0] == "rank\tpoint_id\tk_distance\tderivative"
    dist = [float(l.split("\t")[2]) for l in lines[1:]]
    deriv = [l.split("\t")[3] for l in lines[1:]]
    assert dist == sorted(dist)
    for i in range(len(dist) - 1):
        assert float(deriv[i]) == pytest.approx(dist[i + 1] - dist[i], abs=1e-12)
    assert deriv[-1] == ""
