"""Fully associative vector-buffer simulation over access traces.

The buffer holds whole vertex vectors (one line per vertex).  A read miss
fetches the line from DRAM; a write-partial miss allocates the line
without fetching, since the partial is produced on chip.  Writes mark the
line dirty and evicting a dirty line costs one writeback.  Replacement is
LRU or FIFO over a doubly linked recency list.

With pin_backbone enabled the simulator flushes the buffer at every
segment boundary and pins the segment's stationary refs, provided they
leave at least one unpinned line free; oversized stationary sets degrade
to the plain policy for that segment.  Pinning turns each segment into an
isolated pass whose fetch count is exactly the number of distinct
vertices it touches, which is what the restructuring lower bound counts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigError
from .traces import WRITE_PARTIAL, AccessTrace

__all__ = [
    "POLICIES",
    "BufferConfig",
    "SimMetrics",
    "simulate_buffer",
    "oracle_min_fetches",
    "replacement_histogram",
    "compare",
    "serialize_metrics",
    "serialize_comparison",
    "DEFAULT_HISTOGRAM_EDGES",
]

POLICIES = ("lru", "fifo")

DEFAULT_HISTOGRAM_EDGES = (0, 1, 2, 4, 8, 16)


@dataclass(frozen=True)
class BufferConfig:
    """Capacity in vectors, replacement policy, and backbone pinning."""

    capacity_vectors: int = 256
    policy: str = "lru"
    pin_backbone: bool = False

    def __post_init__(self):
        if self.capacity_vectors < 2:
            raise ConfigError(
                f"capacity_vectors must be at least 2, got {self.capacity_vectors}"
            )
        if self.policy not in POLICIES:
            raise ConfigError(f"policy must be one of {POLICIES}, got {self.policy!r}")


@dataclass(frozen=True)
class SimMetrics:
    """Per-vertex fetch counts plus run configuration and totals."""

    fetches_per_vertex: np.ndarray
    accessed: np.ndarray
    writebacks_total: int
    accesses_total: int
    num_src_root: int
    capacity_vectors: int
    policy: str
    pin_backbone: bool
    vector_bytes: int
    trace_fingerprint: str
    graph_fingerprint: str = ""

    @property
    def fetches_total(self) -> int:
        return int(self.fetches_per_vertex.sum())

    @property
    def touched_total(self) -> int:
        return int(np.count_nonzero(self.accessed))

    @property
    def replacements_per_vertex(self) -> np.ndarray:
        return np.maximum(self.fetches_per_vertex - 1, 0)

    @property
    def replacements_total(self) -> int:
        return int(self.replacements_per_vertex.sum())

    @property
    def total_dram_bytes(self) -> int:
        return (self.fetches_total + self.writebacks_total) * self.vector_bytes


def simulate_buffer(trace: AccessTrace, cfg: BufferConfig, vector_bytes: int = 256) -> SimMetrics:
    if vector_bytes <= 0:
        raise ConfigError(f"vector_bytes must be positive, got {vector_bytes}")
    fetches, accessed, writebacks = kernels.simulate_buffer_core(
        trace.refs,
        trace.kinds,
        trace.num_vertices,
        cfg.capacity_vectors,
        cfg.policy == "fifo",
        cfg.pin_backbone,
        trace.seg_bounds,
        trace.pin_refs,
        trace.pin_ptr,
    )
    return SimMetrics(
        fetches_per_vertex=fetches,
        accessed=accessed,
        writebacks_total=int(writebacks),
        accesses_total=trace.num_refs,
        num_src_root=trace.num_src_root,
        capacity_vectors=cfg.capacity_vectors,
        policy=cfg.policy,
        pin_backbone=cfg.pin_backbone,
        vector_bytes=vector_bytes,
        trace_fingerprint=trace.fingerprint(),
        graph_fingerprint=trace.graph_fingerprint,
    )


def oracle_min_fetches(trace: AccessTrace) -> int:
    """Lower bound on fetches for a segmented trace: distinct reads per segment.

    Counts, per segment, the distinct refs that are actually read (a
    write-allocated partial that is never read costs nothing).  Any buffer
    must fetch each of those at least once within the segment, and a
    pinned run at sufficient capacity attains the bound exactly.
    """
    total = 0
    for k in range(trace.num_segments):
        lo, hi = int(trace.seg_bounds[k]), int(trace.seg_bounds[k + 1])
        seg_refs = trace.refs[lo:hi]
        seg_kinds = trace.kinds[lo:hi]
        _, first_idx = np.unique(seg_refs, return_index=True)
        total += int(np.count_nonzero(seg_kinds[first_idx] != WRITE_PARTIAL))
    return total


def replacement_histogram(metrics: SimMetrics, edges=DEFAULT_HISTOGRAM_EDGES):
    """Bucket touched vertices by replacement count.

    Returns a list of (label, vertex_ratio, access_ratio) rows, one per
    bucket.  Buckets follow the given left edges, the last being open
    ("16+").  vertex_ratio is the fraction of touched vertices in the
    bucket; access_ratio weights each vertex by its fetch count, so it is
    the fraction of fetch traffic the bucket explains.
    """
    edges = tuple(edges)
    if len(edges) < 2 or list(edges) != sorted(set(edges)):
        raise ConfigError(f"histogram edges must be sorted and distinct, got {edges}")
    touched = metrics.fetches_per_vertex > 0
    reps = metrics.replacements_per_vertex[touched]
    fet = metrics.fetches_per_vertex[touched]
    n_vert = int(reps.size)
    n_fet = int(fet.sum())
    if n_vert == 0:
        return []
    rows = []
    assigned = np.zeros(reps.shape, dtype=bool)
    for i, lo in enumerate(edges[:-1]):
        hi = edges[i + 1]
        mask = (reps >= lo) & (reps < hi)
        assigned |= mask
        label = str(lo) if hi == lo + 1 else f"{lo}-{hi - 1}"
        rows.append((label, mask, None))
    # overflow bucket also absorbs anything below the first edge
    rows.append((f"{edges[-1]}+", ~assigned, None))
    return [
        (
            label,
            int(np.count_nonzero(mask)) / n_vert,
            int(fet[mask].sum()) / n_fet if n_fet else 0.0,
        )
        for label, mask, _ in rows
    ]


@dataclass(frozen=True)
class Comparison:
    """Baseline vs restructured traffic on the same root graph."""

    baseline_fetches: int
    restructured_fetches: int
    baseline_dram_bytes: int
    restructured_dram_bytes: int
    baseline_writebacks: int
    restructured_writebacks: int

    @property
    def fetch_ratio(self) -> float:
        if self.baseline_fetches == 0:
            return 0.0 if self.restructured_fetches == 0 else float("inf")
        return self.restructured_fetches / self.baseline_fetches

    @property
    def dram_byte_ratio(self) -> float:
        if self.baseline_dram_bytes == 0:
            return 0.0 if self.restructured_dram_bytes == 0 else float("inf")
        return self.restructured_dram_bytes / self.baseline_dram_bytes


def compare(baseline: SimMetrics, restructured: SimMetrics) -> Comparison:
    if (
        baseline.graph_fingerprint
        and restructured.graph_fingerprint
        and baseline.graph_fingerprint != restructured.graph_fingerprint
    ):
        raise ConfigError(
            "graph fingerprint mismatch: "
            f"{baseline.graph_fingerprint} vs {restructured.graph_fingerprint}"
        )
    if baseline.num_src_root != restructured.num_src_root:
        raise ConfigError("metrics disagree on the root source count; different graphs?")
    if baseline.fetches_per_vertex.size != restructured.fetches_per_vertex.size:
        raise ConfigError("metrics cover different vertex spaces; different graphs?")
    return Comparison(
        baseline_fetches=baseline.fetches_total,
        restructured_fetches=restructured.fetches_total,
        baseline_dram_bytes=baseline.total_dram_bytes,
        restructured_dram_bytes=restructured.total_dram_bytes,
        baseline_writebacks=baseline.writebacks_total,
        restructured_writebacks=restructured.writebacks_total,
    )


# ---------------------------------------------------------------------------
# text / csv output
# ---------------------------------------------------------------------------


def _metrics_items(m: SimMetrics):
    return [
        ("capacity_vectors", m.capacity_vectors),
        ("policy", m.policy),
        ("pin_backbone", str(m.pin_backbone).lower()),
        ("vector_bytes", m.vector_bytes),
        ("accesses_total", m.accesses_total),
        ("fetches_total", m.fetches_total),
        ("replacements_total", m.replacements_total),
        ("writebacks_total", m.writebacks_total),
        ("touched_total", m.touched_total),
        ("total_dram_bytes", m.total_dram_bytes),
    ]


def serialize_metrics(m: SimMetrics, fmt: str = "text", histogram: bool = True) -> str:
    items = _metrics_items(m)
    if fmt == "csv":
        lines = ["metric,value"] + [f"{k},{v}" for k, v in items]
        if histogram:
            lines.append("histogram_bucket,vertex_ratio,access_ratio")
            for label, vr, ar in replacement_histogram(m):
                lines.append(f"{label},{vr:.6f},{ar:.6f}")
        return "\n".join(lines) + "\n"
    if fmt != "text":
        raise ConfigError(f"unknown output format {fmt!r}; expected text or csv")
    lines = [f"{k}: {v}" for k, v in items]
    if histogram:
        lines.append("replacement histogram (bucket vertex_ratio access_ratio):")
        for label, vr, ar in replacement_histogram(m):
            lines.append(f"  {label:>4s} {vr:8.4f} {ar:8.4f}")
    return "\n".join(lines) + "\n"


def serialize_comparison(c: Comparison, fmt: str = "text") -> str:
    items = [
        ("baseline_fetches", c.baseline_fetches),
        ("restructured_fetches", c.restructured_fetches),
        ("fetch_ratio", f"{c.fetch_ratio:.4f}"),
        ("baseline_writebacks", c.baseline_writebacks),
        ("restructured_writebacks", c.restructured_writebacks),
        ("baseline_dram_bytes", c.baseline_dram_bytes),
        ("restructured_dram_bytes", c.restructured_dram_bytes),
        ("dram_byte_ratio", f"{c.dram_byte_ratio:.4f}"),
    ]
    if fmt == "csv":
        return "\n".join(["metric,value"] + [f"{k},{v}" for k, v in items]) + "\n"
    if fmt != "text":
        raise ConfigError(f"unknown output format {fmt!r}; expected text or csv")
    return "\n".join(f"{k}: {v}" for k, v in items) + "\n"
