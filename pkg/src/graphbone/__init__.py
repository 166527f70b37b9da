"""Bipartite graph restructuring for aggregation locality.

graphbone decouples a directed bipartite semantic graph with a maximum
matching, recouples it around the resulting backbone vertex cover, splits
the edges into three locality-friendly subgraphs (recursively, until each
stationary side fits the buffer), and measures the effect with a
trace-driven on-chip buffer simulator.
"""

from .errors import (
    ConfigError,
    ContractError,
    GraphboneError,
    ParseError,
    SchemaError,
)
from .graph import (
    HetGraph,
    Relation,
    SemanticGraph,
    ValidationReport,
    build_semantic_graphs,
    gen_synthetic,
    read_graph,
    validate,
    write_graph,
)
from .matching import (
    EventCounts,
    Matching,
    brute_force_matching_size,
    decoupler_event_counts,
    match_with_events,
    max_matching,
    serialize_matching,
)
from .backbone import (
    Partition,
    Subgraph,
    SubgraphTriple,
    generate_subgraphs,
    select_backbone,
    select_backbone_konig,
    select_backbone_paper,
    serialize_partition,
    verify_cover,
)
from .traces import (
    READ_FEATURE,
    READ_PARTIAL,
    WRITE_PARTIAL,
    AccessTrace,
    na_trace_baseline,
    na_trace_restructured,
)
from .bufsim import (
    BufferConfig,
    Comparison,
    SimMetrics,
    compare,
    oracle_min_fetches,
    replacement_histogram,
    serialize_comparison,
    serialize_metrics,
    simulate_buffer,
)
from .plan import (
    EventWeights,
    PipelineEstimate,
    PlanLeaf,
    PlanNode,
    RestructureConfig,
    RestructurePlan,
    emission_order,
    frontend_cycles,
    pipeline_model,
    restructure_recursive,
    serialize_plan,
)
from .kernels import build_kernels

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "GraphboneError",
    "ParseError",
    "SchemaError",
    "ConfigError",
    "ContractError",
    # graph core
    "SemanticGraph",
    "HetGraph",
    "Relation",
    "ValidationReport",
    "build_semantic_graphs",
    "gen_synthetic",
    "validate",
    "read_graph",
    "write_graph",
    # matching
    "Matching",
    "EventCounts",
    "max_matching",
    "match_with_events",
    "decoupler_event_counts",
    "brute_force_matching_size",
    "serialize_matching",
    # backbone / recoupling
    "Partition",
    "Subgraph",
    "SubgraphTriple",
    "select_backbone",
    "select_backbone_konig",
    "select_backbone_paper",
    "verify_cover",
    "generate_subgraphs",
    "serialize_partition",
    # traces
    "AccessTrace",
    "na_trace_baseline",
    "na_trace_restructured",
    "READ_FEATURE",
    "READ_PARTIAL",
    "WRITE_PARTIAL",
    # buffer simulation
    "BufferConfig",
    "SimMetrics",
    "Comparison",
    "simulate_buffer",
    "oracle_min_fetches",
    "replacement_histogram",
    "compare",
    "serialize_metrics",
    "serialize_comparison",
    # planning / pipeline
    "RestructureConfig",
    "RestructurePlan",
    "PlanLeaf",
    "PlanNode",
    "restructure_recursive",
    "emission_order",
    "pipeline_model",
    "PipelineEstimate",
    "EventWeights",
    "frontend_cycles",
    "serialize_plan",
    # kernels
    "build_kernels",
]
