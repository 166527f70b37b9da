"""Maximum bipartite matching with hardware-style event accounting.

The matcher seeds sources in ascending id order and explores destination
neighbours in ascending id order, so its output is a pure function of the
graph.  Queue pushes, pops, and partner-table lookups are tallied while it
runs; they feed the frontend cost model.

``brute_force_matching_size`` is an independent oracle that enumerates
vertex-disjoint edge subsets.  It shares no code with the fast path and is
deliberately restricted to tiny graphs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigError, ContractError
from .graph import SemanticGraph

__all__ = [
    "NONE",
    "Matching",
    "EventCounts",
    "max_matching",
    "match_with_events",
    "decoupler_event_counts",
    "brute_force_matching_size",
    "serialize_matching",
]

NONE = -1  # unmatched sentinel in partner arrays


@dataclass(frozen=True)
class EventCounts:
    """Queue/table traffic of one matching run."""

    pushes: int
    pops: int
    lookups: int

    def total(self, push_weight: float = 1.0, pop_weight: float = 1.0, lookup_weight: float = 1.0) -> float:
        return self.pushes * push_weight + self.pops * pop_weight + self.lookups * lookup_weight


@dataclass(frozen=True)
class Matching:
    """Partner arrays for both sides; NONE (-1) marks unmatched vertices."""

    src_partner: np.ndarray
    dst_partner: np.ndarray

    @property
    def size(self) -> int:
        return int(np.count_nonzero(self.src_partner != NONE))

    def pairs(self) -> np.ndarray:
        """Matched (src, dst) pairs as an array sorted by source id."""
        srcs = np.flatnonzero(self.src_partner != NONE)
        return np.column_stack([srcs, self.src_partner[srcs]])

    def check_consistent(self, g: SemanticGraph) -> None:
        """Raise ContractError unless the pairing is a valid matching of g."""
        if self.src_partner.shape[0] != g.num_src or self.dst_partner.shape[0] != g.num_dst:
            raise ContractError("partner array lengths do not match the graph")
        for u, v in self.pairs():
            if self.dst_partner[v] != u:
                raise ContractError(f"partner arrays disagree on pair ({u}, {v})")
            row = g.neighbors_of_src(int(u))
            if v not in row:
                raise ContractError(f"matched pair ({u}, {v}) is not an edge")
        matched_dst = np.flatnonzero(self.dst_partner != NONE)
        if matched_dst.size != self.size:
            raise ContractError("matched source and destination counts differ")


def match_with_events(g: SemanticGraph) -> tuple[Matching, EventCounts]:
    """Run the matcher once, returning the pairing and its event tally."""
    src_partner, dst_partner, pushes, pops, lookups = kernels.kuhn_match(
        g.fwd_indptr, g.fwd_indices, g.num_src, g.num_dst
    )
    return (
        Matching(src_partner, dst_partner),
        EventCounts(pushes=int(pushes), pops=int(pops), lookups=int(lookups)),
    )


def max_matching(g: SemanticGraph) -> Matching:
    """Deterministic maximum matching of a semantic graph."""
    return match_with_events(g)[0]


def decoupler_event_counts(g: SemanticGraph) -> EventCounts:
    """Event tally of the matching run on ``g`` (pushes, pops, lookups)."""
    return match_with_events(g)[1]


MAX_ORACLE_EDGES = 24


def brute_force_matching_size(g: SemanticGraph) -> int:
    """Maximum matching size by branch-and-bound over edge subsets.

    Refuses graphs with more than 24 edges; the search is exponential by
    design so it can stay independent of the production matcher.
    """
    m = g.num_edges
    if m > MAX_ORACLE_EDGES:
        raise ConfigError(f"oracle refuses graphs with more than {MAX_ORACLE_EDGES} edges (got {m})")
    edges = [(int(s), int(d)) for s, d in zip(g.src, g.dst)]
    best = 0

    def extend(idx: int, size: int, used_src: int, used_dst: int) -> None:
        nonlocal best
        if size > best:
            best = size
        if size + (m - idx) <= best:
            return  # even taking every remaining edge cannot improve
        for i in range(idx, m):
            s, d = edges[i]
            if used_src >> s & 1 or used_dst >> d & 1:
                continue
            extend(i + 1, size + 1, used_src | (1 << s), used_dst | (1 << d))

    extend(0, 0, 0, 0)
    return best


def serialize_matching(m: Matching) -> str:
    lines = [f"size: {m.size}", "pairs:"]
    lines.extend(f"{u} {v}" for u, v in m.pairs())
    return "\n".join(lines) + "\n"
