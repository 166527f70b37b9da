"""Shared fixtures: named small graphs and kernel warm-up."""

import numpy as np
import pytest

from graphbone import BufferConfig, SemanticGraph, na_trace_baseline, simulate_buffer
from graphbone.matching import max_matching


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the jitted kernels once so timed tests measure steady state."""
    g = SemanticGraph(2, 2, np.array([0, 0, 1, 1]), np.array([0, 1, 0, 1]))
    max_matching(g)
    simulate_buffer(na_trace_baseline(g), BufferConfig(capacity_vectors=2), 256)


def make_graph(pairs, num_src=None, num_dst=None):
    pairs = list(pairs)
    src = np.array([u for u, _ in pairs], dtype=np.int64)
    dst = np.array([v for _, v in pairs], dtype=np.int64)
    if num_src is None:
        num_src = int(src.max()) + 1 if pairs else 0
    if num_dst is None:
        num_dst = int(dst.max()) + 1 if pairs else 0
    return SemanticGraph(num_src, num_dst, src, dst)


@pytest.fixture
def single_edge():
    return make_graph([(0, 0)])


@pytest.fixture
def star():
    """One source feeding three destinations."""
    return make_graph([(0, 0), (0, 1), (0, 2)])


@pytest.fixture
def path3():
    """Path s0 - d0 - s1 - d1 as a bipartite edge list."""
    return make_graph([(0, 0), (1, 0), (1, 1)])


@pytest.fixture
def four_cycle():
    """K_{2,2}: the smallest graph where the two backbone modes diverge."""
    return make_graph([(0, 0), (0, 1), (1, 0), (1, 1)])


@pytest.fixture
def k23():
    return make_graph([(u, v) for u in range(2) for v in range(3)])


@pytest.fixture
def k33():
    return make_graph([(u, v) for u in range(3) for v in range(3)])


@pytest.fixture
def empty_graph():
    return SemanticGraph(0, 0, np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64))
