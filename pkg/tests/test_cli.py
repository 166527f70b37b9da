"""Command-line surface: artifacts, summaries, exit codes, determinism."""

import filecmp
from pathlib import Path

import numpy as np
import pytest

from graphbone import write_graph
from graphbone.cli import main

from conftest import make_graph


def run(*argv):
    return main(list(argv))


def gen_args(out, **kw):
    base = {
        "num-src": 4,
        "num-dst": 4,
        "num-edges": 16,
        "name": "g",
    }
    base.update(kw)
    argv = ["gen", "--output-dir", str(out)]
    for k, v in base.items():
        argv += [f"--{k}", str(v)]
    return argv


def tree_bytes(root: Path) -> dict:
    return {
        str(p.relative_to(root)): p.read_bytes()
        for p in sorted(root.rglob("*"))
        if p.is_file()
    }


def test_gen_writes_graph_files(tmp_path, capsys):
    assert run(*gen_args(tmp_path / "d")) == 0
    assert (tmp_path / "d" / "g.edges").is_file()
    assert (tmp_path / "d" / "g.meta").is_file()
    out = capsys.readouterr().out
    assert "16 edges" in out


def test_gen_same_seed_identical_bytes(tmp_path):
    run(*gen_args(tmp_path / "a", **{"num-edges": 12, "seed": 5}))
    run(*gen_args(tmp_path / "b", **{"num-edges": 12, "seed": 5}))
    assert (tmp_path / "a" / "g.edges").read_bytes() == (tmp_path / "b" / "g.edges").read_bytes()
    assert (tmp_path / "a" / "g.meta").read_bytes() == (tmp_path / "b" / "g.meta").read_bytes()


def test_gen_infeasible_params_exit_code(tmp_path, capsys):
    assert run(*gen_args(tmp_path, **{"num-edges": 99})) == 3
    assert "error:" in capsys.readouterr().err


def test_restructure_star_summary(tmp_path, capsys, star):
    write_graph(star, tmp_path, "star")
    assert run("restructure", "--input", str(tmp_path / "star.edges"), "--output-dir", str(tmp_path / "out")) == 0
    out = capsys.readouterr().out
    assert "matching=1" in out and "backbone=1" in out and "uncovered=0" in out
    gdir = tmp_path / "out" / "star"
    for name in ("matching.txt", "partition.txt", "plan.txt", "leaves/manifest.txt"):
        assert (gdir / name).is_file()
    assert (gdir / "leaves" / "g3.edges").is_file()
    assert (gdir / "leaves" / "g3.remap").is_file()


def test_restructure_paper_literal_warns_on_uncovered(tmp_path, capsys, caplog, four_cycle):
    write_graph(four_cycle, tmp_path, "cyc")
    code = run(
        "restructure",
        "--input", str(tmp_path / "cyc.edges"),
        "--output-dir", str(tmp_path / "out"),
        "--mode", "paper-literal",
    )
    assert code == 0
    assert "uncovered=4" in capsys.readouterr().out
    assert any("uncovered" in r.message for r in caplog.records)


def test_restructure_empty_graph_all_zero_summary(tmp_path, capsys, empty_graph):
    write_graph(empty_graph, tmp_path, "none")
    assert run("restructure", "--input", str(tmp_path / "none.edges"), "--output-dir", str(tmp_path / "out")) == 0
    out = capsys.readouterr().out
    assert "matching=0" in out and "backbone=0" in out and "uncovered=0" in out


def test_simulate_star_pinned_reaches_oracle(tmp_path, star):
    write_graph(star, tmp_path, "star")
    code = run(
        "simulate",
        "--input", str(tmp_path / "star.edges"),
        "--output-dir", str(tmp_path / "sim"),
        "--capacity", "2",
        "--pin-backbone",
    )
    assert code == 0
    comparison = (tmp_path / "sim" / "star" / "comparison.txt").read_text()
    assert "restructured_fetches: 4" in comparison
    assert "baseline_fetches: 6" in comparison


def test_simulate_huge_capacity_ratio_one(tmp_path, k33):
    write_graph(k33, tmp_path, "k33")
    run(
        "simulate",
        "--input", str(tmp_path / "k33.edges"),
        "--output-dir", str(tmp_path / "sim"),
        "--capacity", "64",
    )
    comparison = (tmp_path / "sim" / "k33" / "comparison.txt").read_text()
    assert "fetch_ratio: 1.0000" in comparison
    for side in ("baseline", "restructured"):
        metrics = (tmp_path / "sim" / "k33" / f"{side}_metrics.txt").read_text()
        assert "replacements_total: 0" in metrics


def test_simulate_auto_restructures_missing_plan(tmp_path, star):
    write_graph(star, tmp_path, "star")
    plan_dir = tmp_path / "plans"
    code = run(
        "simulate",
        "--input", str(tmp_path / "star.edges"),
        "--output-dir", str(tmp_path / "sim"),
        "--restructured", str(plan_dir),
    )
    assert code == 0
    assert (plan_dir / "star" / "leaves" / "manifest.txt").is_file()
    # second run reuses the artifacts and produces identical reports
    code = run(
        "simulate",
        "--input", str(tmp_path / "star.edges"),
        "--output-dir", str(tmp_path / "sim2"),
        "--restructured", str(plan_dir),
    )
    assert code == 0
    assert tree_bytes(tmp_path / "sim") == tree_bytes(tmp_path / "sim2")


def test_csv_format(tmp_path, star):
    write_graph(star, tmp_path, "star")
    run(
        "simulate",
        "--input", str(tmp_path / "star.edges"),
        "--output-dir", str(tmp_path / "sim"),
        "--format", "csv",
    )
    lines = (tmp_path / "sim" / "star" / "comparison.csv").read_text().splitlines()
    assert lines[0] == "metric,value"
    assert all("," in ln for ln in lines)
    assert (tmp_path / "sim" / "star" / "baseline_metrics.csv").is_file()


def test_directory_input_processes_all_sorted(tmp_path, capsys):
    data = tmp_path / "data"
    for i, name in enumerate(("beta", "alpha", "gamma")):
        g = make_graph([(0, 0), (1, 0), (1, 1), (0, i % 2)])
        write_graph(g, data, name)
    assert run("restructure", "--input", str(data), "--output-dir", str(tmp_path / "out")) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert [ln.split(":")[0] for ln in lines] == ["alpha", "beta", "gamma"]
    for name in ("alpha", "beta", "gamma"):
        assert (tmp_path / "out" / name / "plan.txt").is_file()


def test_full_pipeline_deterministic(tmp_path):
    for tag in ("one", "two"):
        root = tmp_path / tag
        run(*gen_args(root / "data", **{"num-src": 30, "num-dst": 20, "num-edges": 150, "kind": "power", "seed": 3}))
        run("restructure", "--input", str(root / "data" / "g.edges"), "--output-dir", str(root / "re"), "--capacity", "8")
        run("simulate", "--input", str(root / "data" / "g.edges"), "--output-dir", str(root / "sim"), "--capacity", "8", "--pin-backbone")
    a, b = tmp_path / "one", tmp_path / "two"
    assert tree_bytes(a) == tree_bytes(b)
    cmp = filecmp.dircmp(a, b)
    assert not cmp.diff_files


def test_parse_error_exit_code(tmp_path, capsys):
    (tmp_path / "bad.meta").write_text("num_src: 2\nnum_dst: 2\n")
    (tmp_path / "bad.edges").write_text("0 0\n0 oops\n")
    code = run("restructure", "--input", str(tmp_path / "bad.edges"), "--output-dir", str(tmp_path / "out"))
    assert code == 2
    err = capsys.readouterr().err
    assert "bad.edges:2" in err


def test_missing_input_exit_code(tmp_path):
    assert run("restructure", "--input", str(tmp_path / "nope.edges"), "--output-dir", str(tmp_path / "o")) == 3


def test_usage_errors_exit_code(capsys):
    assert run("bogus") == 3
    assert run("simulate", "--input", "x.edges", "--output-dir", "o", "--policy", "mru") == 3
    capsys.readouterr()


def test_python_dash_m_entry_point(tmp_path):
    import subprocess
    import sys

    out = subprocess.run(
        [sys.executable, "-m", "graphbone", "gen", "--output-dir", str(tmp_path),
         "--num-src", "3", "--num-dst", "3", "--num-edges", "4"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0
    assert (tmp_path / "graph.edges").is_file()
