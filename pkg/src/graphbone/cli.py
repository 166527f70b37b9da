"""Command-line surface: generate, restructure, and simulate.

Subcommands:

* ``gen`` writes a synthetic bipartite graph as ``<name>.meta`` +
  ``<name>.edges``.
* ``restructure`` reads a graph, runs matching + backbone selection +
  recursive subgraph splitting, and writes matching/partition/plan files
  plus the compacted leaf subgraphs with remap tables.
* ``simulate`` runs the baseline and restructured buffer simulations and
  writes both metric reports and a comparison.  ``--restructured DIR``
  reuses a prior restructure output; if the plan artifacts are missing
  there, the restructure step runs automatically first.

``--input`` may be a single ``.edges`` file or a directory, in which case
every ``*.edges`` file inside is processed concurrently and artifacts land
under one subdirectory per graph stem.  All outputs are plain text with
stable key order (or comma-separated with ``--format csv``), so identical
configurations produce byte-identical artifacts.

Exit codes: 0 success, 2 input parse errors, 3 configuration errors
(including bad flags), 4 internal contract violations.
"""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .backbone import MODES, select_backbone, serialize_partition
from .bufsim import (
    POLICIES,
    BufferConfig,
    compare,
    serialize_comparison,
    serialize_metrics,
    simulate_buffer,
)
from .errors import ConfigError, ContractError, ParseError
from .graph import gen_synthetic, read_graph, write_graph
from .matching import match_with_events, serialize_matching
from .plan import (
    PlanLeaf,
    RestructureConfig,
    RestructurePlan,
    restructure_recursive,
    serialize_plan,
)
from .traces import na_trace_baseline, na_trace_restructured

__all__ = ["main", "build_parser", "cmd_gen", "cmd_restructure", "cmd_simulate"]

log = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems through the config-error path."""

    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="graphbone", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a synthetic bipartite graph")
    p_gen.add_argument("--output-dir", required=True)
    p_gen.add_argument("--num-src", type=int, required=True)
    p_gen.add_argument("--num-dst", type=int, required=True)
    p_gen.add_argument("--num-edges", type=int, required=True)
    p_gen.add_argument("--kind", choices=("uniform", "power"), default="uniform")
    p_gen.add_argument("--exponent", type=float, default=1.5)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--name", default="graph", help="output file stem")
    p_gen.set_defaults(func=cmd_gen)

    def add_restructure_flags(p):
        p.add_argument("--mode", choices=MODES, default="konig")
        p.add_argument("--capacity", type=int, default=256, help="buffer capacity in vectors")
        p.add_argument("--theta", type=float, default=0.5, help="stationary/capacity stop threshold")
        p.add_argument("--max-depth", type=int, default=2)

    p_re = sub.add_parser("restructure", help="decouple and recouple a graph")
    p_re.add_argument("--input", required=True, help=".edges file or directory of them")
    p_re.add_argument("--output-dir", required=True)
    add_restructure_flags(p_re)
    p_re.add_argument("--format", choices=("text", "csv"), default="text")
    p_re.set_defaults(func=cmd_restructure)

    p_sim = sub.add_parser("simulate", help="run baseline vs restructured buffer simulation")
    p_sim.add_argument("--input", required=True, help=".edges file or directory of them")
    p_sim.add_argument("--output-dir", required=True)
    add_restructure_flags(p_sim)
    p_sim.add_argument("--policy", choices=POLICIES, default="lru")
    p_sim.add_argument("--pin-backbone", action="store_true")
    p_sim.add_argument("--format", choices=("text", "csv"), default="text")
    p_sim.add_argument(
        "--restructured",
        metavar="DIR",
        default=None,
        help="restructure output dir to reuse; auto-populated when missing",
    )
    p_sim.set_defaults(func=cmd_simulate)
    return parser


def _input_files(path_str: str) -> list[Path]:
    path = Path(path_str)
    if path.is_dir():
        files = sorted(path.glob("*.edges"))
        if not files:
            raise ConfigError(f"no .edges files in directory {path}")
        return files
    if not path.is_file():
        raise ConfigError(f"input path not found: {path}")
    return [path]


def _run_many(files, worker):
    if len(files) == 1:
        return [worker(files[0])]
    with ThreadPoolExecutor(max_workers=min(8, len(files))) as pool:
        return list(pool.map(worker, files))


# ---------------------------------------------------------------------------
# leaf artifact round trip
# ---------------------------------------------------------------------------


def _ids(arr) -> str:
    return " ".join(str(i) for i in arr)


def _write_leaves(plan: RestructurePlan, directory: Path) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    lines = [
        f"root_num_src: {plan.root_num_src}",
        f"root_num_dst: {plan.root_num_dst}",
        f"mode: {plan.mode}",
        f"uncovered_total: {plan.total_uncovered_edges}",
    ]
    for lf in plan.leaves:
        write_graph(lf.graph, directory, lf.lineage)
        remap = [
            f"kind: {lf.kind}",
            f"src_map: {_ids(lf.src_map)}".rstrip(),
            f"dst_map: {_ids(lf.dst_map)}".rstrip(),
        ]
        (directory / f"{lf.lineage}.remap").write_text("\n".join(remap) + "\n", encoding="utf-8")
        lines.append(f"leaf: {lf.lineage} kind={lf.kind} depth={lf.depth}")
    (directory / "manifest.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")


def _parse_kv(text: str, path: Path) -> dict:
    out = {}
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise ParseError("expected 'key: value'", path=str(path), line=i)
        k, v = line.split(":", 1)
        out.setdefault(k.strip(), []).append(v.strip())
    return out


def _id_array(text: str) -> np.ndarray:
    return np.array([int(t) for t in text.split()], dtype=np.int64)


def _load_leaves(gdir: Path, cfg: RestructureConfig, root_fingerprint: str):
    """Rebuild a plan's leaves from a restructure output dir, or None."""
    manifest = gdir / "leaves" / "manifest.txt"
    if not manifest.is_file():
        return None
    kv = _parse_kv(manifest.read_text(encoding="utf-8"), manifest)
    try:
        root_num_src = int(kv["root_num_src"][0])
        root_num_dst = int(kv["root_num_dst"][0])
        mode = kv["mode"][0]
        uncovered = int(kv["uncovered_total"][0])
    except (KeyError, ValueError) as exc:
        raise ParseError(f"bad leaf manifest: {exc}", path=str(manifest)) from exc
    leaves = []
    for spec in kv.get("leaf", []):
        fields = spec.split()
        lineage = fields[0]
        opts = dict(f.split("=", 1) for f in fields[1:] if "=" in f)
        graph = read_graph(gdir / "leaves" / f"{lineage}.edges")
        rpath = gdir / "leaves" / f"{lineage}.remap"
        if not rpath.is_file():
            raise ConfigError(f"remap table not found: {rpath}")
        rkv = _parse_kv(rpath.read_text(encoding="utf-8"), rpath)
        leaves.append(
            PlanLeaf(
                graph=graph,
                src_map=_id_array(rkv.get("src_map", [""])[0]),
                dst_map=_id_array(rkv.get("dst_map", [""])[0]),
                kind=opts.get("kind", rkv["kind"][0]),
                depth=int(opts.get("depth", "0")),
                lineage=lineage,
            )
        )
    plan = RestructurePlan(
        root_num_src=root_num_src,
        root_num_dst=root_num_dst,
        root_fingerprint=root_fingerprint,
        mode=mode,
        config=cfg,
        nodes=(),
        leaves=tuple(leaves),
    )
    return plan, uncovered


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_gen(args) -> list[str]:
    g = gen_synthetic(
        args.num_src,
        args.num_dst,
        args.num_edges,
        kind=args.kind,
        seed=args.seed,
        exponent=args.exponent,
    )
    meta_path, edges_path = write_graph(g, Path(args.output_dir), args.name)
    return [
        f"{args.name}: wrote {Path(edges_path).name} + {Path(meta_path).name} "
        f"({g.num_src}x{g.num_dst}, {g.num_edges} edges, kind={args.kind}, seed={args.seed})"
    ]


def _restructure_cfg(args) -> RestructureConfig:
    return RestructureConfig(
        mode=args.mode,
        capacity_vectors=args.capacity,
        theta=args.theta,
        max_depth=args.max_depth,
    )


def _restructure_one(in_path: Path, out_root: Path, cfg: RestructureConfig) -> str:
    g = read_graph(in_path)
    stem = in_path.stem
    m, _events = match_with_events(g)
    part = select_backbone(g, m, cfg.mode)
    plan = restructure_recursive(g, cfg)
    gdir = out_root / stem
    gdir.mkdir(parents=True, exist_ok=True)
    (gdir / "matching.txt").write_text(serialize_matching(m), encoding="utf-8")
    (gdir / "partition.txt").write_text(serialize_partition(part), encoding="utf-8")
    (gdir / "plan.txt").write_text(serialize_plan(plan), encoding="utf-8")
    _write_leaves(plan, gdir / "leaves")
    uncovered = plan.total_uncovered_edges
    if uncovered:
        log.warning("%s: %d edge(s) left uncovered; routed to the mixed subgraph", stem, uncovered)
    return (
        f"{stem}: matching={m.size} backbone={part.backbone_size} "
        f"src_in={part.src_in.size} src_out={part.src_out.size} "
        f"dst_in={part.dst_in.size} dst_out={part.dst_out.size} "
        f"uncovered={uncovered} leaves={len(plan.leaves)}"
    )


def cmd_restructure(args) -> list[str]:
    cfg = _restructure_cfg(args)
    out_root = Path(args.output_dir)
    out_root.mkdir(parents=True, exist_ok=True)
    return _run_many(_input_files(args.input), lambda p: _restructure_one(p, out_root, cfg))


def _simulate_one(in_path: Path, out_root: Path, args, cfg: RestructureConfig) -> str:
    g = read_graph(in_path)
    stem = in_path.stem
    plan = None
    uncovered = 0
    if args.restructured is not None:
        rdir = Path(args.restructured) / stem
        loaded = _load_leaves(rdir, cfg, g.fingerprint())
        if loaded is None:
            _restructure_one(in_path, Path(args.restructured), cfg)
            loaded = _load_leaves(rdir, cfg, g.fingerprint())
        plan, uncovered = loaded
    else:
        plan = restructure_recursive(g, cfg)
        uncovered = plan.total_uncovered_edges

    buf_cfg = BufferConfig(
        capacity_vectors=args.capacity,
        policy=args.policy,
        pin_backbone=args.pin_backbone,
    )
    base_metrics = simulate_buffer(na_trace_baseline(g), buf_cfg, g.vector_bytes)
    rest_metrics = simulate_buffer(na_trace_restructured(plan), buf_cfg, g.vector_bytes)
    comp = compare(base_metrics, rest_metrics)

    gdir = out_root / stem
    gdir.mkdir(parents=True, exist_ok=True)
    ext = "csv" if args.format == "csv" else "txt"
    (gdir / f"baseline_metrics.{ext}").write_text(
        serialize_metrics(base_metrics, args.format), encoding="utf-8"
    )
    (gdir / f"restructured_metrics.{ext}").write_text(
        serialize_metrics(rest_metrics, args.format), encoding="utf-8"
    )
    (gdir / f"comparison.{ext}").write_text(serialize_comparison(comp, args.format), encoding="utf-8")
    return (
        f"{stem}: baseline_fetches={comp.baseline_fetches} "
        f"restructured_fetches={comp.restructured_fetches} "
        f"fetch_ratio={comp.fetch_ratio:.4f} uncovered={uncovered}"
    )


def cmd_simulate(args) -> list[str]:
    cfg = _restructure_cfg(args)
    out_root = Path(args.output_dir)
    out_root.mkdir(parents=True, exist_ok=True)
    return _run_many(_input_files(args.input), lambda p: _simulate_one(p, out_root, args, cfg))


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        for line in args.func(args):
            print(line)
        return 0
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ContractError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
