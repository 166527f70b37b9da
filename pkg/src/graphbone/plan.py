"""Recursive restructuring plans and the two-stage pipeline cost model.

One restructuring round splits a graph into the g1/g2/g3 class subgraphs.
A round only pays off if the stationary side of a subgraph still fits the
buffer; when it does not, the subgraph is restructured again.  The stop
rule is: recurse into a child iff its stationary side exceeds theta times
the buffer capacity and the depth budget allows it.  The root itself is
always decoupled when max_depth >= 1; max_depth 0 degenerates to a single
root leaf that replays the baseline sweep.

Leaves carry id maps composed all the way back to the root namespace, so
traces built from a plan address root vertices directly.  Emission order
is depth-first g1, g2, g3, which matches construction order.

The pipeline model estimates total latency when restructuring (frontend)
overlaps aggregation (backend) leaf by leaf: the backend for leaf i runs
concurrently with the frontend for leaf i+1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .backbone import generate_subgraphs, select_backbone
from .errors import ConfigError
from .graph import SemanticGraph
from .matching import EventCounts, match_with_events

__all__ = [
    "RestructureConfig",
    "PlanLeaf",
    "PlanNode",
    "RestructurePlan",
    "restructure_recursive",
    "emission_order",
    "EventWeights",
    "frontend_cycles",
    "pipeline_model",
    "PipelineEstimate",
    "serialize_plan",
]


@dataclass(frozen=True)
class RestructureConfig:
    """Knobs for the recursive driver.

    theta scales the capacity threshold in the stop rule; max_depth bounds
    how many decoupling rounds any edge can pass through.
    """

    mode: str = "konig"
    capacity_vectors: int = 256
    theta: float = 0.5
    max_depth: int = 2

    def __post_init__(self):
        if self.mode not in ("konig", "paper-literal"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.capacity_vectors < 2:
            raise ConfigError("capacity_vectors must be at least 2")
        if not (self.theta > 0):
            raise ConfigError("theta must be positive")
        if self.max_depth < 0:
            raise ConfigError("max_depth must be non-negative")

    @property
    def stationary_limit(self) -> float:
        return self.theta * self.capacity_vectors


@dataclass(frozen=True)
class PlanLeaf:
    """A subgraph scheduled for one aggregation segment.

    src_map/dst_map translate local ids straight to root ids.  kind is the
    class of the final decoupling round ("root" for an undecoupled root).
    """

    graph: SemanticGraph
    src_map: np.ndarray
    dst_map: np.ndarray
    kind: str
    depth: int
    lineage: str

    @property
    def stationary_side(self) -> str:
        return {"g1": "dst", "g2": "src", "g3": "src", "root": "none"}[self.kind]

    @property
    def stationary_size(self) -> int:
        side = self.stationary_side
        if side == "src":
            return int(self.src_map.size)
        if side == "dst":
            return int(self.dst_map.size)
        return 0


@dataclass(frozen=True)
class PlanNode:
    """Bookkeeping record for one graph visited during planning."""

    lineage: str
    depth: int
    kind: str
    num_src: int
    num_dst: int
    num_edges: int
    stationary_size: int
    is_leaf: bool
    events: EventCounts | None = None
    uncovered_edges: int = 0
    children: tuple[str, ...] = field(default=())


@dataclass(frozen=True)
class RestructurePlan:
    root_num_src: int
    root_num_dst: int
    root_fingerprint: str
    mode: str
    config: RestructureConfig
    nodes: tuple[PlanNode, ...]
    leaves: tuple[PlanLeaf, ...]

    @property
    def total_uncovered_edges(self) -> int:
        return sum(n.uncovered_edges for n in self.nodes)

    @property
    def total_events(self) -> EventCounts:
        pushes = pops = lookups = 0
        for n in self.nodes:
            if n.events is not None:
                pushes += n.events.pushes
                pops += n.events.pops
                lookups += n.events.lookups
        return EventCounts(pushes=pushes, pops=pops, lookups=lookups)

    @property
    def max_stationary_size(self) -> int:
        return max((lf.stationary_size for lf in self.leaves), default=0)

    def leaf_edge_total(self) -> int:
        return sum(lf.graph.num_edges for lf in self.leaves)


def _compose(outer_map: np.ndarray, inner_map: np.ndarray) -> np.ndarray:
    """Root ids for local ids that go local -> parent -> root."""
    return outer_map[inner_map]


def _plan_graph(g, src_map, dst_map, kind, depth, lineage, cfg, nodes, leaves):
    """Recurse on one graph; append its node record and any leaves."""
    decouple = depth < cfg.max_depth and g.num_edges > 0 and (
        kind == "root" or _stationary_of(g, src_map, dst_map, kind) > cfg.stationary_limit
    )
    if not decouple:
        leaves.append(
            PlanLeaf(
                graph=g, src_map=src_map, dst_map=dst_map, kind=kind, depth=depth,
                lineage=lineage,
            )
        )
        nodes.append(
            PlanNode(
                lineage=lineage, depth=depth, kind=kind, num_src=g.num_src,
                num_dst=g.num_dst, num_edges=g.num_edges,
                stationary_size=_stationary_of(g, src_map, dst_map, kind),
                is_leaf=True,
            )
        )
        return

    m, events = match_with_events(g)
    part = select_backbone(g, m, cfg.mode)
    triple = generate_subgraphs(g, part)
    child_names = []
    child_args = []
    for sub in triple.subgraphs():
        if sub.graph.num_edges == 0:
            continue
        child_lineage = sub.kind if lineage == "root" else f"{lineage}.{sub.kind}"
        child_names.append(child_lineage)
        child_args.append(
            (
                sub.graph,
                _compose(src_map, sub.src_map),
                _compose(dst_map, sub.dst_map),
                sub.kind,
                depth + 1,
                child_lineage,
            )
        )
    nodes.append(
        PlanNode(
            lineage=lineage, depth=depth, kind=kind, num_src=g.num_src,
            num_dst=g.num_dst, num_edges=g.num_edges,
            stationary_size=_stationary_of(g, src_map, dst_map, kind),
            is_leaf=False, events=events, uncovered_edges=triple.uncovered_edges,
            children=tuple(child_names),
        )
    )
    for args in child_args:
        _plan_graph(*args, cfg, nodes, leaves)


def _stationary_of(g, src_map, dst_map, kind) -> int:
    side = {"g1": "dst", "g2": "src", "g3": "src", "root": "none"}[kind]
    if side == "src":
        return int(src_map.size)
    if side == "dst":
        return int(dst_map.size)
    return 0


def restructure_recursive(g: SemanticGraph, cfg: RestructureConfig) -> RestructurePlan:
    """Build the full plan tree for a root graph under one config."""
    nodes: list[PlanNode] = []
    leaves: list[PlanLeaf] = []
    _plan_graph(
        g,
        np.arange(g.num_src, dtype=np.int64),
        np.arange(g.num_dst, dtype=np.int64),
        "root",
        0,
        "root",
        cfg,
        nodes,
        leaves,
    )
    return RestructurePlan(
        root_num_src=g.num_src,
        root_num_dst=g.num_dst,
        root_fingerprint=g.fingerprint(),
        mode=cfg.mode,
        config=cfg,
        nodes=tuple(nodes),
        leaves=tuple(leaves),
    )


def emission_order(plan: RestructurePlan) -> list[str]:
    return [lf.lineage for lf in plan.leaves]


# ---------------------------------------------------------------------------
# frontend cost and pipeline overlap
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EventWeights:
    """Cycle weights for the decoupler's stack and lookup events."""

    push: int = 1
    pop: int = 1
    lookup: int = 1

    def cycles(self, ev: EventCounts) -> int:
        return self.push * ev.pushes + self.pop * ev.pops + self.lookup * ev.lookups


def frontend_cycles(plan: RestructurePlan, weights: EventWeights = EventWeights()) -> int:
    """Total decoupling work across every internal node of the plan."""
    return weights.cycles(plan.total_events)


@dataclass(frozen=True)
class PipelineEstimate:
    total: int
    frontend_sum: int
    backend_sum: int
    stage_count: int

    @property
    def lower_bound(self) -> int:
        return max(self.frontend_sum, self.backend_sum)

    @property
    def upper_bound(self) -> int:
        return self.frontend_sum + self.backend_sum


def pipeline_model(frontend: list[int] | np.ndarray, backend: list[int] | np.ndarray) -> PipelineEstimate:
    """Two-stage overlap: backend of leaf i hides the frontend of leaf i+1.

    total = f[0] + sum(max(f[i+1], b[i])) + b[-1].  With frontend [3, 3, 3]
    and backend [5, 5, 5] that is 3 + 5 + 5 + 5 = 18.  The estimate always
    lies between max(sum(f), sum(b)) and sum(f) + sum(b).
    """
    f = np.asarray(frontend, dtype=np.int64)
    b = np.asarray(backend, dtype=np.int64)
    if f.size == 0 or b.size == 0:
        raise ConfigError("pipeline stages must be non-empty")
    if f.size != b.size:
        raise ConfigError(f"stage count mismatch: {f.size} frontend vs {b.size} backend")
    if np.any(f < 0) or np.any(b < 0):
        raise ConfigError("stage latencies must be non-negative")
    total = int(f[0]) + int(np.maximum(f[1:], b[:-1]).sum()) + int(b[-1])
    return PipelineEstimate(
        total=total,
        frontend_sum=int(f.sum()),
        backend_sum=int(b.sum()),
        stage_count=int(f.size),
    )


def serialize_plan(plan: RestructurePlan) -> str:
    lines = [
        f"mode: {plan.mode}",
        f"root: {plan.root_num_src} x {plan.root_num_dst}, fingerprint {plan.root_fingerprint}",
        f"capacity_vectors: {plan.config.capacity_vectors}",
        f"theta: {plan.config.theta}",
        f"max_depth: {plan.config.max_depth}",
        "nodes:",
    ]
    for n in plan.nodes:
        tag = "leaf" if n.is_leaf else "split"
        base = (
            f"  {n.lineage}: {tag} depth={n.depth} kind={n.kind} "
            f"size={n.num_src}x{n.num_dst} edges={n.num_edges} "
            f"stationary={n.stationary_size}"
        )
        if not n.is_leaf:
            ev = n.events
            base += (
                f" pushes={ev.pushes} pops={ev.pops} lookups={ev.lookups}"
                f" uncovered={n.uncovered_edges}"
            )
        lines.append(base)
    lines.append("emission: " + " ".join(emission_order(plan)))
    ev = plan.total_events
    lines.append(f"events_total: pushes={ev.pushes} pops={ev.pops} lookups={ev.lookups}")
    lines.append(f"uncovered_total: {plan.total_uncovered_edges}")
    return "\n".join(lines) + "\n"
