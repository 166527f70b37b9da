"""Directed bipartite semantic graphs and their on-disk formats.

A semantic graph couples one source vertex class to one destination class
through a single relation.  Edges are canonicalised on construction:
sorted by (src, dst), deduplicated, and exposed through forward (source
to destination) and reverse CSR views whose neighbour lists are ascending.
Relations whose endpoint types coincide still get two independent id
namespaces, so self-relations behave like any other relation.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, ContractError, ParseError, SchemaError

__all__ = [
    "Relation",
    "SemanticGraph",
    "HetGraph",
    "ValidationReport",
    "load_metadata",
    "load_edge_list",
    "build_semantic_graphs",
    "gen_synthetic",
    "validate",
    "serialize_metadata",
    "serialize_edge_list",
    "write_graph",
    "read_graph",
]

log = logging.getLogger(__name__)

DEFAULT_FEATURE_DIM = 64
DEFAULT_VALUE_BYTES = 4


@dataclass(frozen=True)
class Relation:
    """A directed edge type between two vertex classes."""

    name: str
    src_type: str
    dst_type: str


def _csr_from_pairs(major, minor, num_major):
    indptr = np.zeros(num_major + 1, dtype=np.int64)
    np.add.at(indptr, major + 1, 1)
    np.cumsum(indptr, out=indptr)
    return indptr, minor.copy()


class SemanticGraph:
    """One relation's bipartite graph with dual CSR adjacency.

    Parameters
    ----------
    num_src, num_dst:
        Declared vertex counts; ids must fall inside these ranges.
    src, dst:
        Parallel edge endpoint arrays (any integer dtype).  Duplicate
        pairs are dropped with a logged warning; the count of dropped
        pairs is kept on ``duplicates_dropped``.
    """

    def __init__(
        self,
        num_src: int,
        num_dst: int,
        src,
        dst,
        relation: Relation | None = None,
        feature_dim: int = DEFAULT_FEATURE_DIM,
        value_bytes: int = DEFAULT_VALUE_BYTES,
    ):
        if num_src < 0 or num_dst < 0:
            raise ConfigError("vertex counts must be non-negative")
        if feature_dim <= 0 or value_bytes <= 0:
            raise ConfigError("feature_dim and value_bytes must be positive")
        src = np.asarray(src, dtype=np.int64).ravel()
        dst = np.asarray(dst, dtype=np.int64).ravel()
        if src.shape != dst.shape:
            raise ContractError("src and dst arrays must have equal length")
        if src.size:
            if src.min(initial=0) < 0 or dst.min(initial=0) < 0:
                raise ContractError("negative vertex id in edge list")
            if src.max(initial=-1) >= num_src:
                raise ContractError(f"source id {int(src.max())} >= num_src {num_src}")
            if dst.max(initial=-1) >= num_dst:
                raise ContractError(f"destination id {int(dst.max())} >= num_dst {num_dst}")
        self.num_src = int(num_src)
        self.num_dst = int(num_dst)
        self.relation = relation or Relation("edge", "src", "dst")
        self.feature_dim = int(feature_dim)
        self.value_bytes = int(value_bytes)

        if src.size:
            order = np.lexsort((dst, src))
            src = src[order]
            dst = dst[order]
            keep = np.ones(src.size, dtype=bool)
            keep[1:] = (src[1:] != src[:-1]) | (dst[1:] != dst[:-1])
            self.duplicates_dropped = int(src.size - keep.sum())
            if self.duplicates_dropped:
                log.warning(
                    "dropped %d duplicate edge(s) in relation %s",
                    self.duplicates_dropped,
                    self.relation.name,
                )
            src = src[keep]
            dst = dst[keep]
        else:
            self.duplicates_dropped = 0
        self.src = src
        self.dst = dst
        self.fwd_indptr, self.fwd_indices = _csr_from_pairs(src, dst, self.num_src)
        rev_order = np.lexsort((src, dst))
        self.rev_indptr, self.rev_indices = _csr_from_pairs(
            dst[rev_order], src[rev_order], self.num_dst
        )

    # -- basic accessors ---------------------------------------------------

    @property
    def num_edges(self) -> int:
        return int(self.src.size)

    @property
    def vector_bytes(self) -> int:
        """Bytes of one feature (or partial-result) vector."""
        return self.feature_dim * self.value_bytes

    def out_degree(self):
        return np.diff(self.fwd_indptr)

    def in_degree(self):
        return np.diff(self.rev_indptr)

    def neighbors_of_src(self, u: int):
        return self.fwd_indices[self.fwd_indptr[u] : self.fwd_indptr[u + 1]]

    def neighbors_of_dst(self, v: int):
        return self.rev_indices[self.rev_indptr[v] : self.rev_indptr[v + 1]]

    def fingerprint(self) -> str:
        """Stable structural digest used to pair simulation results."""
        h = hashlib.sha256()
        h.update(f"{self.num_src},{self.num_dst};".encode())
        h.update(self.src.tobytes())
        h.update(b"|")
        h.update(self.dst.tobytes())
        return h.hexdigest()[:16]

    def __eq__(self, other):
        if not isinstance(other, SemanticGraph):
            return NotImplemented
        return (
            self.num_src == other.num_src
            and self.num_dst == other.num_dst
            and self.relation == other.relation
            and self.feature_dim == other.feature_dim
            and self.value_bytes == other.value_bytes
            and np.array_equal(self.src, other.src)
            and np.array_equal(self.dst, other.dst)
        )

    def __repr__(self):
        return (
            f"SemanticGraph({self.relation.name!r}, {self.num_src}x{self.num_dst}, "
            f"{self.num_edges} edges)"
        )


@dataclass
class HetGraph:
    """A heterogeneous graph: typed vertex sets plus per-relation edges."""

    vertex_types: dict[str, int]
    relations: list[Relation] = field(default_factory=list)
    edges: dict[str, tuple[np.ndarray, np.ndarray]] = field(default_factory=dict)

    def add_relation(self, relation: Relation, src, dst) -> None:
        for label in (relation.src_type, relation.dst_type):
            if label not in self.vertex_types:
                raise SchemaError(
                    f"relation {relation.name!r} references unknown vertex type {label!r}"
                )
        self.relations.append(relation)
        self.edges[relation.name] = (
            np.asarray(src, dtype=np.int64),
            np.asarray(dst, dtype=np.int64),
        )


def build_semantic_graphs(
    het: HetGraph,
    feature_dim: int = DEFAULT_FEATURE_DIM,
    value_bytes: int = DEFAULT_VALUE_BYTES,
) -> list[SemanticGraph]:
    """Split a heterogeneous graph into one semantic graph per relation.

    Relation order is preserved.  Each endpoint class gets its own id
    namespace even when a relation loops a type onto itself.
    """
    graphs = []
    for rel in het.relations:
        for attr, label in (("src_type", rel.src_type), ("dst_type", rel.dst_type)):
            if label not in het.vertex_types:
                raise SchemaError(
                    f"relation {rel.name!r} references unknown vertex type {label!r}"
                )
        src, dst = het.edges.get(rel.name, (np.empty(0, np.int64), np.empty(0, np.int64)))
        graphs.append(
            SemanticGraph(
                het.vertex_types[rel.src_type],
                het.vertex_types[rel.dst_type],
                src,
                dst,
                relation=rel,
                feature_dim=feature_dim,
                value_bytes=value_bytes,
            )
        )
    return graphs


# ---------------------------------------------------------------------------
# synthetic generators
# ---------------------------------------------------------------------------


def gen_synthetic(
    num_src: int,
    num_dst: int,
    num_edges: int,
    kind: str = "uniform",
    seed: int = 0,
    exponent: float = 1.5,
) -> SemanticGraph:
    """Deterministically generate a random bipartite graph without duplicates.

    ``uniform`` draws edge slots uniformly from the src x dst grid.
    ``power`` draws destination endpoints with Zipf-like skew (probability
    proportional to 1 / (id + 1) ** exponent) and sources uniformly, which
    concentrates in-degree on low destination ids.
    """
    if kind not in ("uniform", "power"):
        raise ConfigError(f"unknown generator kind {kind!r}")
    if num_src <= 0 or num_dst <= 0:
        raise ConfigError("generator needs positive vertex counts")
    if num_edges < 0:
        raise ConfigError("num_edges must be non-negative")
    space = num_src * num_dst
    if num_edges > space:
        raise ConfigError(f"num_edges {num_edges} exceeds {num_src}*{num_dst} possible pairs")
    rng = np.random.default_rng(seed)
    if num_edges == 0:
        return SemanticGraph(num_src, num_dst, [], [], relation=Relation(kind, "src", "dst"))

    if kind == "uniform":
        if space <= 4 * num_edges or space <= 1 << 22:
            flat = rng.choice(space, size=num_edges, replace=False)
        else:
            flat = _reject_unique(
                rng, num_edges, lambda n: rng.integers(0, space, size=n), space=space
            )
        src = flat // num_dst
        dst = flat % num_dst
    else:
        weights = 1.0 / np.power(np.arange(1, num_dst + 1, dtype=np.float64), exponent)
        weights /= weights.sum()
        cdf = np.cumsum(weights)

        def draw(n):
            s = rng.integers(0, num_src, size=n)
            d = np.searchsorted(cdf, rng.random(n), side="right")
            return s * num_dst + d

        flat = _reject_unique(rng, num_edges, draw, space=space)
        src = flat // num_dst
        dst = flat % num_dst
    return SemanticGraph(num_src, num_dst, src, dst, relation=Relation(kind, "src", "dst"))


def _reject_unique(rng, num_edges, draw, space=None):
    """Accumulate unique draws; falls back to enumerating leftover pairs."""
    seen = np.empty(0, dtype=np.int64)
    attempts = 0
    while seen.size < num_edges and attempts < 64:
        batch = draw(2 * (num_edges - seen.size) + 16)
        seen = np.unique(np.concatenate([seen, batch.astype(np.int64)]))
        attempts += 1
    if seen.size < num_edges:
        # dense corner: fill deterministically from the unused pair slots
        mask = np.ones(space, dtype=bool)
        mask[seen] = False
        leftovers = np.flatnonzero(mask)
        extra = leftovers[: num_edges - seen.size]
        return np.sort(np.concatenate([seen, extra]))
    # deterministic subset: keep the first draws' order-independent choice
    return np.sort(rng.permutation(seen)[:num_edges])


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ValidationReport:
    num_src: int
    num_dst: int
    num_edges: int
    duplicate_edges: int
    isolated_sources: int
    isolated_destinations: int
    max_src_degree: int
    max_dst_degree: int

    def lines(self) -> list[str]:
        return [
            f"num_src: {self.num_src}",
            f"num_dst: {self.num_dst}",
            f"num_edges: {self.num_edges}",
            f"duplicate_edges: {self.duplicate_edges}",
            f"isolated_sources: {self.isolated_sources}",
            f"isolated_destinations: {self.isolated_destinations}",
            f"max_src_degree: {self.max_src_degree}",
            f"max_dst_degree: {self.max_dst_degree}",
        ]


def validate(g: SemanticGraph) -> ValidationReport:
    """Report structural counts: duplicates dropped, isolation, degree peaks."""
    out_deg = g.out_degree()
    in_deg = g.in_degree()
    return ValidationReport(
        num_src=g.num_src,
        num_dst=g.num_dst,
        num_edges=g.num_edges,
        duplicate_edges=g.duplicates_dropped,
        isolated_sources=int(np.count_nonzero(out_deg == 0)),
        isolated_destinations=int(np.count_nonzero(in_deg == 0)),
        max_src_degree=int(out_deg.max(initial=0)),
        max_dst_degree=int(in_deg.max(initial=0)),
    )


# ---------------------------------------------------------------------------
# text formats
# ---------------------------------------------------------------------------

_META_KEYS = (
    "relation",
    "src_type",
    "dst_type",
    "num_src",
    "num_dst",
    "num_edges",
    "feature_dim",
    "value_bytes",
)


def serialize_metadata(g: SemanticGraph) -> str:
    lines = [
        f"relation: {g.relation.name}",
        f"src_type: {g.relation.src_type}",
        f"dst_type: {g.relation.dst_type}",
        f"num_src: {g.num_src}",
        f"num_dst: {g.num_dst}",
        f"num_edges: {g.num_edges}",
        f"feature_dim: {g.feature_dim}",
        f"value_bytes: {g.value_bytes}",
    ]
    return "\n".join(lines) + "\n"


def serialize_edge_list(g: SemanticGraph) -> str:
    """Deduplicated, (src, dst)-sorted pairs; one ``src dst`` line each."""
    parts = ["# src dst\n"]
    src = g.src
    dst = g.dst
    parts.extend(f"{src[i]} {dst[i]}\n" for i in range(src.size))
    return "".join(parts)


def load_metadata(text: str, path: str | None = None) -> dict:
    """Parse a key/value metadata document (``key: value`` per line)."""
    meta: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise ParseError("expected 'key: value'", path=path, line=lineno)
        key, _, value = line.partition(":")
        key = key.strip()
        value = value.strip()
        if key not in _META_KEYS:
            raise ParseError(f"unknown metadata key {key!r}", path=path, line=lineno)
        if key in ("num_src", "num_dst", "num_edges", "feature_dim", "value_bytes"):
            try:
                meta[key] = int(value)
            except ValueError:
                raise ParseError(f"{key} must be an integer, got {value!r}", path=path, line=lineno)
        else:
            meta[key] = value
    for required in ("num_src", "num_dst"):
        if required not in meta:
            raise ParseError(f"missing required metadata key {required!r}", path=path)
    return meta


def load_edge_list(text: str, meta: dict, path: str | None = None) -> SemanticGraph:
    """Parse ``src dst`` lines against declared ranges; '#' starts a comment.

    Ids outside [0, num_src) x [0, num_dst) raise a ParseError naming the
    offending line.  Duplicate pairs are dropped (with a warning count on
    the returned graph).
    """
    num_src = meta["num_src"]
    num_dst = meta["num_dst"]
    srcs: list[int] = []
    dsts: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 2:
            raise ParseError(
                f"expected 'src dst', got {len(fields)} field(s)", path=path, line=lineno
            )
        try:
            u = int(fields[0])
            v = int(fields[1])
        except ValueError:
            raise ParseError(f"non-integer vertex id in {line!r}", path=path, line=lineno)
        if not 0 <= u < num_src:
            raise ParseError(f"source id {u} outside [0, {num_src})", path=path, line=lineno)
        if not 0 <= v < num_dst:
            raise ParseError(f"destination id {v} outside [0, {num_dst})", path=path, line=lineno)
        srcs.append(u)
        dsts.append(v)
    relation = Relation(
        meta.get("relation", "edge"),
        meta.get("src_type", "src"),
        meta.get("dst_type", "dst"),
    )
    g = SemanticGraph(
        num_src,
        num_dst,
        srcs,
        dsts,
        relation=relation,
        feature_dim=meta.get("feature_dim", DEFAULT_FEATURE_DIM),
        value_bytes=meta.get("value_bytes", DEFAULT_VALUE_BYTES),
    )
    declared = meta.get("num_edges")
    if declared is not None and declared != g.num_edges:
        log.warning(
            "metadata declares %d edges but %d unique pairs were loaded", declared, g.num_edges
        )
    return g


def write_graph(g: SemanticGraph, directory, stem: str) -> tuple[str, str]:
    """Write ``<stem>.meta`` and ``<stem>.edges`` under ``directory``."""
    from pathlib import Path

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    meta_path = directory / f"{stem}.meta"
    edges_path = directory / f"{stem}.edges"
    meta_path.write_text(serialize_metadata(g), encoding="utf-8")
    edges_path.write_text(serialize_edge_list(g), encoding="utf-8")
    return str(meta_path), str(edges_path)


def read_graph(edges_path) -> SemanticGraph:
    """Load a graph from ``<stem>.edges`` with its sibling ``<stem>.meta``."""
    from pathlib import Path

    edges_path = Path(edges_path)
    meta_path = edges_path.with_suffix(".meta")
    if not edges_path.is_file():
        raise ConfigError(f"edge list not found: {edges_path}")
    if not meta_path.is_file():
        raise ConfigError(f"metadata file not found: {meta_path}")
    meta = load_metadata(meta_path.read_text(encoding="utf-8"), path=str(meta_path))
    return load_edge_list(edges_path.read_text(encoding="utf-8"), meta, path=str(edges_path))
