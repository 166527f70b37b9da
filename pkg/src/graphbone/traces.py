"""Neighbour-aggregation access traces for the buffer simulator.

A trace is the flat sequence of vector references one aggregation pass
issues.  References live in a unified namespace: source u is ref u, and
destination v is ref num_src_root + v, so a parent vector and the partial
result written back to it share one buffer line.

Three reference kinds exist:

* read-feature (rf): load a source feature vector.
* read-partial (rp): load a destination's partial aggregate.
* write-partial (wp): store the updated partial back.

The baseline trace sweeps destinations in ascending order and, per
destination, reads its in-neighbours ascending between the rp/wp pair.
Restructured traces emit one segment per plan leaf, scheduled so the
streamed side is walked sequentially while the stationary side repeats:

* g1 keeps dst_in stationary, so it iterates sources: [rf u, then rp v /
  wp v for each out-neighbour v ascending].
* g2 and g3 keep src_in stationary, so they iterate destinations with the
  baseline [rp v, rf u..., wp v] shape.
* a leaf that was never decoupled falls back to the baseline sweep.

Segment boundaries and per-segment stationary ref lists ride along with
the trace so the simulator can flush and pin at segment starts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from hashlib import sha256

import numpy as np

from .errors import ContractError
from .graph import SemanticGraph

__all__ = [
    "READ_FEATURE",
    "READ_PARTIAL",
    "WRITE_PARTIAL",
    "KIND_NAMES",
    "AccessTrace",
    "na_trace_baseline",
    "na_trace_restructured",
]

READ_FEATURE = 0  # rf: source feature vector load
READ_PARTIAL = 1  # rp: destination partial load
WRITE_PARTIAL = 2  # wp: destination partial store

KIND_NAMES = {READ_FEATURE: "rf", READ_PARTIAL: "rp", WRITE_PARTIAL: "wp"}


@dataclass(frozen=True)
class AccessTrace:
    """A reference stream plus its segment/pin structure.

    refs/kinds are parallel arrays over the whole stream.  Segment k spans
    refs[seg_bounds[k]:seg_bounds[k+1]] and pins the stationary refs
    pin_refs[pin_ptr[k]:pin_ptr[k+1]] (empty slice means nothing to pin).
    num_vertices is the unified ref-space size (num_src_root + num_dst_root).
    """

    refs: np.ndarray
    kinds: np.ndarray
    num_src_root: int
    num_dst_root: int
    seg_bounds: np.ndarray
    pin_refs: np.ndarray
    pin_ptr: np.ndarray
    seg_labels: tuple[str, ...] = field(default=())
    graph_fingerprint: str = ""

    @property
    def num_refs(self) -> int:
        return int(self.refs.size)

    @property
    def num_vertices(self) -> int:
        return self.num_src_root + self.num_dst_root

    @property
    def num_segments(self) -> int:
        return int(self.seg_bounds.size - 1)

    def validate(self) -> None:
        if self.refs.shape != self.kinds.shape:
            raise ContractError("refs and kinds length mismatch")
        if self.seg_bounds[0] != 0 or self.seg_bounds[-1] != self.num_refs:
            raise ContractError("segment bounds do not tile the trace")
        if np.any(np.diff(self.seg_bounds) < 0):
            raise ContractError("segment bounds must be non-decreasing")
        if self.pin_ptr.size != self.seg_bounds.size:
            raise ContractError("pin_ptr must have one entry per segment boundary")
        if self.refs.size and (self.refs.min() < 0 or self.refs.max() >= self.num_vertices):
            raise ContractError("trace ref outside unified vertex space")
        if self.pin_refs.size and (
            self.pin_refs.min() < 0 or self.pin_refs.max() >= self.num_vertices
        ):
            raise ContractError("pin ref outside unified vertex space")
        rf = self.kinds == READ_FEATURE
        if np.any(self.refs[rf] >= self.num_src_root):
            raise ContractError("read-feature ref must name a source vertex")
        if np.any(self.refs[~rf] < self.num_src_root):
            raise ContractError("partial ref must name a destination vertex")

    def fingerprint(self) -> str:
        h = sha256()
        h.update(np.int64(self.num_src_root).tobytes())
        h.update(np.int64(self.num_dst_root).tobytes())
        h.update(self.refs.tobytes())
        h.update(self.kinds.tobytes())
        h.update(self.seg_bounds.tobytes())
        h.update(self.pin_refs.tobytes())
        h.update(self.pin_ptr.tobytes())
        return h.hexdigest()[:16]

    def render(self, limit: int | None = None) -> str:
        """Human-readable listing like "rp p3" / "rf 0", one ref per line."""
        n = self.num_refs if limit is None else min(limit, self.num_refs)
        out = []
        for i in range(n):
            r = int(self.refs[i])
            k = KIND_NAMES[int(self.kinds[i])]
            if r >= self.num_src_root:
                out.append(f"{k} p{r - self.num_src_root}")
            else:
                out.append(f"{k} {r}")
        if n < self.num_refs:
            out.append(f"... ({self.num_refs - n} more)")
        return "\n".join(out)


def _dest_major_arrays(indptr, indices, dst_ids, src_ids, num_src_root):
    """[rp v, rf u..., wp v] per destination, vectorised.

    dst_ids/src_ids map local ids to the root namespace.  Destinations with
    no in-neighbours still get their rp/wp pair (their partial is real).
    """
    deg = np.diff(indptr)
    n = deg.size
    total = int(indptr[-1]) + 2 * n
    refs = np.empty(total, dtype=np.int64)
    kinds = np.empty(total, dtype=np.int8)
    starts = indptr[:-1] + 2 * np.arange(n)  # rp position per destination
    ends = indptr[1:] + 2 * np.arange(1, n + 1) - 1  # wp position
    dst_refs = dst_ids + num_src_root
    refs[starts] = dst_refs
    kinds[starts] = READ_PARTIAL
    refs[ends] = dst_refs
    kinds[ends] = WRITE_PARTIAL
    mid = np.ones(total, dtype=bool)
    mid[starts] = False
    mid[ends] = False
    refs[mid] = src_ids[indices]
    kinds[mid] = READ_FEATURE
    return refs, kinds


def _source_major_arrays(indptr, indices, src_ids, dst_ids, num_src_root):
    """[rf u, (rp v, wp v)...] per source, vectorised.

    Used when destinations are the streamed side (g1).  Sources with no
    out-neighbours are skipped entirely; there is nothing to aggregate.
    """
    deg = np.diff(indptr)
    keep = deg > 0
    deg = deg[keep]
    n = deg.size
    nnz = int(indptr[-1])
    total = nnz * 2 + n
    refs = np.empty(total, dtype=np.int64)
    kinds = np.empty(total, dtype=np.int8)
    # each kept source contributes 1 + 2*deg refs
    block = 1 + 2 * deg
    starts = np.zeros(n, dtype=np.int64)
    np.cumsum(block[:-1], out=starts[1:])
    refs[starts] = src_ids[keep]
    kinds[starts] = READ_FEATURE
    mid = np.ones(total, dtype=bool)
    mid[starts] = False
    dst_stream = dst_ids[indices] + num_src_root
    pairs = np.empty(nnz * 2, dtype=np.int64)
    pairs[0::2] = dst_stream
    pairs[1::2] = dst_stream
    refs[mid] = pairs
    pk = np.empty(nnz * 2, dtype=np.int8)
    pk[0::2] = READ_PARTIAL
    pk[1::2] = WRITE_PARTIAL
    kinds[mid] = pk
    return refs, kinds


def _baseline_arrays(g: SemanticGraph, num_src_root: int):
    dst_ids = np.arange(g.num_dst, dtype=np.int64)
    src_ids = np.arange(g.num_src, dtype=np.int64)
    return _dest_major_arrays(g.rev_indptr, g.rev_indices, dst_ids, src_ids, num_src_root)


def na_trace_baseline(g: SemanticGraph) -> AccessTrace:
    """Destination-major aggregation sweep over the unrestructured graph."""
    refs, kinds = _baseline_arrays(g, g.num_src)
    trace = AccessTrace(
        refs=refs,
        kinds=kinds,
        num_src_root=g.num_src,
        num_dst_root=g.num_dst,
        seg_bounds=np.array([0, refs.size], dtype=np.int64),
        pin_refs=np.empty(0, dtype=np.int64),
        pin_ptr=np.array([0, 0], dtype=np.int64),
        seg_labels=("root",),
        graph_fingerprint=g.fingerprint(),
    )
    trace.validate()
    return trace


def _leaf_segment(leaf, num_src_root):
    """(refs, kinds, pins, label) for one emitted leaf."""
    g = leaf.graph
    smap = leaf.src_map
    dmap = leaf.dst_map
    if leaf.kind == "g1":
        refs, kinds = _source_major_arrays(g.fwd_indptr, g.fwd_indices, smap, dmap, num_src_root)
        pins = dmap + num_src_root
    elif leaf.kind in ("g2", "g3"):
        refs, kinds = _dest_major_arrays(g.rev_indptr, g.rev_indices, dmap, smap, num_src_root)
        pins = smap.copy()
    elif leaf.kind == "root":
        refs, kinds = _dest_major_arrays(g.rev_indptr, g.rev_indices, dmap, smap, num_src_root)
        pins = np.empty(0, dtype=np.int64)
    else:
        raise ContractError(f"unknown leaf kind {leaf.kind!r}")
    return refs, kinds, pins.astype(np.int64), leaf.kind


def na_trace_restructured(plan_or_triple, num_src_root=None, num_dst_root=None) -> AccessTrace:
    """Segmented trace over restructured leaves in emission order.

    Accepts either a RestructurePlan (uses its leaves and root dims) or a
    SubgraphTriple plus explicit root dims, in which case the non-empty
    class subgraphs are emitted g1, g2, g3.
    """
    if hasattr(plan_or_triple, "leaves"):
        # root leaves keep their rp/wp sweep even with no edges; class leaves
        # with no edges have nothing to stream
        leaves = [
            lf
            for lf in plan_or_triple.leaves
            if lf.graph.num_edges > 0 or lf.kind == "root"
        ]
        num_src_root = plan_or_triple.root_num_src
        num_dst_root = plan_or_triple.root_num_dst
        labels = tuple(lf.lineage for lf in leaves)
        graph_fp = plan_or_triple.root_fingerprint
    else:
        triple = plan_or_triple
        if num_src_root is None or num_dst_root is None:
            num_src_root = triple.parent_num_src
            num_dst_root = triple.parent_num_dst
        leaves = triple.nonempty()
        labels = tuple(lf.kind for lf in leaves)
        graph_fp = triple.parent_fingerprint

    ref_parts, kind_parts, pin_parts = [], [], []
    seg_bounds = [0]
    pin_ptr = [0]
    for leaf in leaves:
        refs, kinds, pins, _ = _leaf_segment(leaf, num_src_root)
        ref_parts.append(refs)
        kind_parts.append(kinds)
        pin_parts.append(pins)
        seg_bounds.append(seg_bounds[-1] + refs.size)
        pin_ptr.append(pin_ptr[-1] + pins.size)

    refs = np.concatenate(ref_parts) if ref_parts else np.empty(0, dtype=np.int64)
    kinds = np.concatenate(kind_parts) if kind_parts else np.empty(0, dtype=np.int8)
    pin_refs = np.concatenate(pin_parts) if pin_parts else np.empty(0, dtype=np.int64)
    trace = AccessTrace(
        refs=refs,
        kinds=kinds,
        num_src_root=num_src_root,
        num_dst_root=num_dst_root,
        seg_bounds=np.asarray(seg_bounds, dtype=np.int64),
        pin_refs=pin_refs,
        pin_ptr=np.asarray(pin_ptr, dtype=np.int64),
        seg_labels=labels,
        graph_fingerprint=graph_fp,
    )
    trace.validate()
    return trace
