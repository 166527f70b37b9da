"""Backbone selection and edge-partitioned subgraph generation.

After matching, every vertex lands in one of four classes: src_in and
dst_in form the backbone (the shared-neighbour cover that should stay
buffer-resident), src_out and dst_out are the streamed remainder.  Two
selection modes exist:

* ``konig`` derives the backbone from alternating-path reachability, so it
  is a minimum vertex cover: every edge touches the backbone and its size
  equals the matching size.
* ``paper-literal`` transcribes a published classification pass that keys
  only on matched vertices with unmatched neighbours.  It can leave edges
  between src_out and dst_out uncovered; those are counted and routed to
  the mixed subgraph rather than dropped.

Edges then split into three subgraphs by endpoint class:
g1 = (src_out x dst_in), g2 = (src_in x dst_in), g3 = (src_in x dst_out).
Each subgraph is compacted to dense local ids with remap tables back to
the parent namespace.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigError, ContractError
from .graph import SemanticGraph
from .matching import NONE, Matching

__all__ = [
    "MODES",
    "Partition",
    "Subgraph",
    "SubgraphTriple",
    "select_backbone_konig",
    "select_backbone_paper",
    "select_backbone",
    "verify_cover",
    "generate_subgraphs",
    "serialize_partition",
]

MODES = ("konig", "paper-literal")


@dataclass(frozen=True)
class Partition:
    """Four disjoint vertex classes covering both sides of a graph."""

    num_src: int
    num_dst: int
    src_in: np.ndarray
    src_out: np.ndarray
    dst_in: np.ndarray
    dst_out: np.ndarray
    mode: str

    @property
    def backbone_size(self) -> int:
        return int(self.src_in.size + self.dst_in.size)

    def src_in_mask(self) -> np.ndarray:
        mask = np.zeros(self.num_src, dtype=bool)
        mask[self.src_in] = True
        return mask

    def dst_in_mask(self) -> np.ndarray:
        mask = np.zeros(self.num_dst, dtype=bool)
        mask[self.dst_in] = True
        return mask


def _partition_from_masks(num_src, num_dst, src_in_mask, dst_in_mask, mode) -> Partition:
    return Partition(
        num_src=num_src,
        num_dst=num_dst,
        src_in=np.flatnonzero(src_in_mask).astype(np.int64),
        src_out=np.flatnonzero(~src_in_mask).astype(np.int64),
        dst_in=np.flatnonzero(dst_in_mask).astype(np.int64),
        dst_out=np.flatnonzero(~dst_in_mask).astype(np.int64),
        mode=mode,
    )


def select_backbone_konig(g: SemanticGraph, m: Matching) -> Partition:
    """Minimum-vertex-cover backbone from alternating reachability.

    Runs a BFS from every unmatched source along unmatched-forward /
    matched-backward edges.  Sources not reached plus destinations reached
    form a cover whose size equals the matching size, so every edge is
    guaranteed to touch the backbone.
    """
    src_reach, dst_reach = kernels.alternating_reach(
        g.fwd_indptr, g.fwd_indices, m.src_partner, m.dst_partner, g.num_src, g.num_dst
    )
    return _partition_from_masks(g.num_src, g.num_dst, ~src_reach, dst_reach, "konig")


def select_backbone_paper(g: SemanticGraph, m: Matching) -> Partition:
    """Literal transcription of the classification pass this mode mirrors.

    A matched source with at least one unmatched destination neighbour
    becomes src_in and pushes those neighbours to dst_out; symmetrically a
    matched destination with unmatched source neighbours becomes dst_in and
    pushes them to src_out.  Everything left over falls to the out classes.
    Unlike ``konig`` this can leave src_out-to-dst_out edges uncovered.
    """
    src_matched = m.src_partner != NONE
    dst_matched = m.dst_partner != NONE
    edge_src = g.src
    edge_dst = g.dst
    edge_src_matched = src_matched[edge_src]
    edge_dst_matched = dst_matched[edge_dst]

    # matched sources with an unmatched neighbour, and those neighbours
    src_in_mask = np.zeros(g.num_src, dtype=bool)
    np.logical_or.at(src_in_mask, edge_src, ~edge_dst_matched)
    src_in_mask &= src_matched
    dst_out_explicit = np.zeros(g.num_dst, dtype=bool)
    np.logical_or.at(dst_out_explicit, edge_dst, src_in_mask[edge_src] & ~edge_dst_matched)

    dst_in_mask = np.zeros(g.num_dst, dtype=bool)
    np.logical_or.at(dst_in_mask, edge_dst, ~edge_src_matched)
    dst_in_mask &= dst_matched
    src_out_explicit = np.zeros(g.num_src, dtype=bool)
    np.logical_or.at(src_out_explicit, edge_src, dst_in_mask[edge_dst] & ~edge_src_matched)

    if np.any(src_in_mask & src_out_explicit) or np.any(dst_in_mask & dst_out_explicit):
        raise ContractError("vertex classified into both in and out classes")
    return _partition_from_masks(g.num_src, g.num_dst, src_in_mask, dst_in_mask, "paper-literal")


def select_backbone(g: SemanticGraph, m: Matching, mode: str = "konig") -> Partition:
    if mode == "konig":
        return select_backbone_konig(g, m)
    if mode == "paper-literal":
        return select_backbone_paper(g, m)
    raise ConfigError(f"unknown backbone mode {mode!r}; expected one of {MODES}")


def verify_cover(g: SemanticGraph, p: Partition) -> int:
    """Number of edges touching neither backbone class (0 means covered)."""
    src_in = p.src_in_mask()
    dst_in = p.dst_in_mask()
    return int(np.count_nonzero(~src_in[g.src] & ~dst_in[g.dst]))


# ---------------------------------------------------------------------------
# subgraph generation
# ---------------------------------------------------------------------------

# which side of each subgraph stays buffer-resident while the other streams
_STATIONARY_SIDE = {"g1": "dst", "g2": "src", "g3": "src", "root": "none"}


@dataclass(frozen=True)
class Subgraph:
    """A compacted edge-class subgraph with maps back to its parent ids."""

    graph: SemanticGraph
    src_map: np.ndarray  # local source id -> parent source id (ascending)
    dst_map: np.ndarray
    kind: str  # g1 | g2 | g3

    @property
    def stationary_side(self) -> str:
        return _STATIONARY_SIDE[self.kind]

    @property
    def stationary_size(self) -> int:
        side = self.stationary_side
        if side == "src":
            return int(self.src_map.size)
        if side == "dst":
            return int(self.dst_map.size)
        return 0

    def parent_edges(self) -> tuple[np.ndarray, np.ndarray]:
        """Edges expressed in parent ids (for partition checks)."""
        return self.src_map[self.graph.src], self.dst_map[self.graph.dst]


@dataclass(frozen=True)
class SubgraphTriple:
    """The three class subgraphs of one parent graph, in emission order."""

    g1: Subgraph
    g2: Subgraph
    g3: Subgraph
    parent_num_src: int
    parent_num_dst: int
    parent_fingerprint: str
    uncovered_edges: int

    def subgraphs(self) -> tuple[Subgraph, Subgraph, Subgraph]:
        return (self.g1, self.g2, self.g3)

    def nonempty(self) -> list[Subgraph]:
        return [s for s in self.subgraphs() if s.graph.num_edges > 0]

    @property
    def max_stationary_size(self) -> int:
        return max((s.stationary_size for s in self.nonempty()), default=0)


def _compact(parent: SemanticGraph, edge_idx: np.ndarray, kind: str) -> Subgraph:
    src = parent.src[edge_idx]
    dst = parent.dst[edge_idx]
    src_map = np.unique(src)
    dst_map = np.unique(dst)
    local = SemanticGraph(
        src_map.size,
        dst_map.size,
        np.searchsorted(src_map, src),
        np.searchsorted(dst_map, dst),
        relation=parent.relation,
        feature_dim=parent.feature_dim,
        value_bytes=parent.value_bytes,
    )
    return Subgraph(graph=local, src_map=src_map, dst_map=dst_map, kind=kind)


def generate_subgraphs(g: SemanticGraph, p: Partition) -> SubgraphTriple:
    """Partition parent edges into g1/g2/g3 and compact each class.

    In konig mode an uncovered edge is impossible and raises a
    ContractError.  In paper-literal mode uncovered edges are counted and
    routed to g2 so no edge is ever dropped.
    """
    src_in = p.src_in_mask()[g.src]
    dst_in = p.dst_in_mask()[g.dst]
    uncovered = ~src_in & ~dst_in
    n_uncovered = int(np.count_nonzero(uncovered))
    if n_uncovered and p.mode == "konig":
        raise ContractError(f"konig backbone left {n_uncovered} edge(s) uncovered")
    idx_g1 = np.flatnonzero(~src_in & dst_in)
    idx_g2 = np.flatnonzero((src_in & dst_in) | uncovered)
    idx_g3 = np.flatnonzero(src_in & ~dst_in)
    return SubgraphTriple(
        g1=_compact(g, idx_g1, "g1"),
        g2=_compact(g, idx_g2, "g2"),
        g3=_compact(g, idx_g3, "g3"),
        parent_num_src=g.num_src,
        parent_num_dst=g.num_dst,
        parent_fingerprint=g.fingerprint(),
        uncovered_edges=n_uncovered,
    )


def serialize_partition(p: Partition) -> str:
    def ids(arr):
        return " ".join(str(i) for i in arr)

    lines = [
        f"mode: {p.mode}",
        f"num_src: {p.num_src}",
        f"num_dst: {p.num_dst}",
        f"src_in: {ids(p.src_in)}".rstrip(),
        f"src_out: {ids(p.src_out)}".rstrip(),
        f"dst_in: {ids(p.dst_in)}".rstrip(),
        f"dst_out: {ids(p.dst_out)}".rstrip(),
    ]
    return "\n".join(lines) + "\n"
