"""Hot numeric kernels with a numba fast path and a pure-Python fallback.

Each kernel is a plain module-level function over numpy arrays, written in
nopython-compatible style.  When numba is importable (and not disabled via
the ``GRAPHBONE_KERNELS`` environment variable) the functions are compiled
with ``@njit(cache=True)``; otherwise the exact same code runs uncompiled.
Both lanes execute the same statements, so results are bit-identical and
numba is purely a speed lever.

Set ``GRAPHBONE_KERNELS=python`` (or ``numpy``/``off``) before import to
force the interpreted lane.  ``benchmarks/bench_kernels.py`` times the two
lanes against each other.
"""

from __future__ import annotations

import os
from types import SimpleNamespace

import numpy as np

__all__ = [
    "USE_NUMBA",
    "BACKEND",
    "build_kernels",
    "kuhn_match",
    "alternating_reach",
    "simulate_buffer_core",
]

_ENV_VAR = "GRAPHBONE_KERNELS"
_DISABLE_VALUES = {"python", "numpy", "off", "none", "0", "false"}


def _numba_requested() -> bool:
    return os.environ.get(_ENV_VAR, "numba").strip().lower() not in _DISABLE_VALUES


USE_NUMBA = False
if _numba_requested():
    try:
        import numba  # noqa: F401

        USE_NUMBA = True
    except ImportError:  # pragma: no cover - exercised only without numba
        USE_NUMBA = False

BACKEND = "numba" if USE_NUMBA else "python"


# ---------------------------------------------------------------------------
# kernel bodies (nopython-compatible)
# ---------------------------------------------------------------------------


def _kuhn_match_impl(indptr, indices, num_src, num_dst):
    """Maximum bipartite matching via iterative augmenting-path search.

    Sources are seeded in ascending id order and each search visits
    destination neighbours in ascending id order, which pins the output
    for a given graph.  Alongside the partner arrays the kernel tallies
    the queue traffic of a hardware-style matching unit:

    * pushes   - one per not-yet-visited neighbour examined,
    * pops     - one per existing pair broken while applying an
                 augmenting path (a rematch),
    * lookups  - partner-table probes (one per seed plus one per push).

    Returns (src_partner, dst_partner, pushes, pops, lookups) with -1 as
    the unmatched sentinel.
    """
    src_partner = np.full(num_src, -1, np.int64)
    dst_partner = np.full(num_dst, -1, np.int64)
    # visited stamp per destination: the seed id, so no per-seed reset
    visited = np.full(num_dst, -1, np.int64)
    # explicit DFS stack; one frame per source on the alternating path
    stack_src = np.empty(num_src + 1, np.int64)
    stack_ptr = np.empty(num_src + 1, np.int64)
    stack_via = np.empty(num_src + 1, np.int64)
    pushes = 0
    pops = 0
    lookups = 0

    for seed in range(num_src):
        lookups += 1
        if src_partner[seed] >= 0:
            continue
        top = 0
        stack_src[0] = seed
        stack_ptr[0] = indptr[seed]
        stack_via[0] = -1
        while top >= 0:
            u = stack_src[top]
            p = stack_ptr[top]
            if p >= indptr[u + 1]:
                top -= 1  # dead end; resume the parent frame
                continue
            stack_ptr[top] = p + 1
            v = indices[p]
            if visited[v] == seed:
                continue
            visited[v] = seed
            pushes += 1
            lookups += 1
            w = dst_partner[v]
            if w < 0:
                # free destination: apply the augmenting path bottom-up
                src_partner[u] = v
                dst_partner[v] = u
                for k in range(top - 1, -1, -1):
                    uu = stack_src[k]
                    vv = stack_via[k + 1]
                    pops += 1
                    src_partner[uu] = vv
                    dst_partner[vv] = uu
                break
            # occupied: try to rematch the current owner one level down
            stack_via[top + 1] = v
            stack_src[top + 1] = w
            stack_ptr[top + 1] = indptr[w]
            top += 1
    return src_partner, dst_partner, pushes, pops, lookups


def _alternating_reach_impl(indptr, indices, src_partner, dst_partner, num_src, num_dst):
    """BFS over alternating paths seeded at every unmatched source.

    Traverses unmatched edges source-to-destination and matched edges
    destination-to-source.  Seeds enter in ascending id order.  Returns
    boolean reachability masks (src_reach, dst_reach); the minimum vertex
    cover is (sources not reached) union (destinations reached).
    """
    src_reach = np.zeros(num_src, np.bool_)
    dst_reach = np.zeros(num_dst, np.bool_)
    queue = np.empty(num_src, np.int64)
    head = 0
    tail = 0
    for u in range(num_src):
        if src_partner[u] < 0:
            src_reach[u] = True
            queue[tail] = u
            tail += 1
    while head < tail:
        u = queue[head]
        head += 1
        for p in range(indptr[u], indptr[u + 1]):
            v = indices[p]
            if src_partner[u] == v:
                continue  # only unmatched edges go forward
            if dst_reach[v]:
                continue
            dst_reach[v] = True
            w = dst_partner[v]
            if w >= 0 and not src_reach[w]:
                src_reach[w] = True
                queue[tail] = w
                tail += 1
    return src_reach, dst_reach


def _simulate_buffer_impl(
    refs,
    kinds,
    num_refs,
    capacity,
    fifo,
    pin_enabled,
    seg_bounds,
    pin_refs,
    pin_ptr,
):
    """Fully associative buffer model over an access trace.

    kinds: 0 = read-feature, 1 = read-partial, 2 = write-partial.
    Read misses fetch one vector; write misses allocate a line without a
    fetch; evicting a dirty line writes one vector back.  Recency is a
    doubly-linked list, so victim order is total and the lowest-ref tie
    break never has to fire.  ``fifo`` freezes recency updates on hits.

    With ``pin_enabled`` the trace's segments model one subgraph each:
    at every segment start resident lines are flushed (dirty ones write
    back) and the segment's stationary refs become eviction-exempt,
    provided they fit in capacity - 1 lines; otherwise the segment runs
    as plain LRU/FIFO.  Without pinning segments are ignored and reuse
    carries across the whole trace.

    Returns (fetches per-ref int64, accessed per-ref bool, writebacks).
    """
    fetches = np.zeros(num_refs, np.int64)
    accessed = np.zeros(num_refs, np.bool_)
    writebacks = 0

    slot_ref = np.full(capacity, -1, np.int64)
    slot_dirty = np.zeros(capacity, np.bool_)
    slot_of = np.full(num_refs, -1, np.int64)
    # recency list over slot ids with two sentinel nodes
    head = capacity  # most recent side
    tail = capacity + 1  # eviction side
    nxt = np.full(capacity + 2, -1, np.int64)
    prv = np.full(capacity + 2, -1, np.int64)
    nxt[head] = tail
    prv[tail] = head
    free_stack = np.empty(capacity, np.int64)
    for i in range(capacity):
        free_stack[i] = capacity - 1 - i
    free_top = capacity

    pin_stamp = np.zeros(num_refs, np.int64)
    num_segments = seg_bounds.shape[0] - 1

    for seg in range(num_segments):
        cur_stamp = seg + 1
        if pin_enabled:
            # flush everything resident; the segment starts cold
            node = nxt[head]
            while node != tail:
                r = slot_ref[node]
                if slot_dirty[node]:
                    writebacks += 1
                slot_of[r] = -1
                slot_ref[node] = -1
                slot_dirty[node] = False
                free_stack[free_top] = node
                free_top += 1
                node = nxt[node]
            nxt[head] = tail
            prv[tail] = head
            # pin the stationary side when it leaves at least one line free
            lo = pin_ptr[seg]
            hi = pin_ptr[seg + 1]
            if hi - lo <= capacity - 1:
                for i in range(lo, hi):
                    pin_stamp[pin_refs[i]] = cur_stamp

        for i in range(seg_bounds[seg], seg_bounds[seg + 1]):
            ref = refs[i]
            kind = kinds[i]
            accessed[ref] = True
            sl = slot_of[ref]
            if sl >= 0:
                if kind == 2:
                    slot_dirty[sl] = True
                if not fifo:
                    # unlink and reinsert at the recent end
                    nxt[prv[sl]] = nxt[sl]
                    prv[nxt[sl]] = prv[sl]
                    nxt[sl] = nxt[head]
                    prv[sl] = head
                    prv[nxt[head]] = sl
                    nxt[head] = sl
                continue
            # miss: reads fetch, writes allocate silently
            if kind != 2:
                fetches[ref] += 1
            if free_top > 0:
                free_top -= 1
                sl = free_stack[free_top]
            else:
                cand = prv[tail]
                if pin_enabled:
                    while pin_stamp[slot_ref[cand]] == cur_stamp:
                        cand = prv[cand]
                victim = slot_ref[cand]
                if slot_dirty[cand]:
                    writebacks += 1
                slot_of[victim] = -1
                nxt[prv[cand]] = nxt[cand]
                prv[nxt[cand]] = prv[cand]
                sl = cand
            slot_ref[sl] = ref
            slot_dirty[sl] = kind == 2
            slot_of[ref] = sl
            nxt[sl] = nxt[head]
            prv[sl] = head
            prv[nxt[head]] = sl
            nxt[head] = sl
    return fetches, accessed, writebacks


# ---------------------------------------------------------------------------
# lane selection
# ---------------------------------------------------------------------------

_IMPLS = {
    "kuhn_match": _kuhn_match_impl,
    "alternating_reach": _alternating_reach_impl,
    "simulate_buffer_core": _simulate_buffer_impl,
}

_CACHE: dict[bool, SimpleNamespace] = {}


def build_kernels(use_numba: bool) -> SimpleNamespace:
    """Return the kernel set for one lane; compiled lazily and memoised."""
    if use_numba in _CACHE:
        return _CACHE[use_numba]
    if use_numba:
        from numba import njit

        fns = {name: njit(cache=True)(fn) for name, fn in _IMPLS.items()}
    else:
        fns = dict(_IMPLS)
    ns = SimpleNamespace(name="numba" if use_numba else "python", **fns)
    _CACHE[use_numba] = ns
    return ns


_default = build_kernels(USE_NUMBA)
kuhn_match = _default.kuhn_match
alternating_reach = _default.alternating_reach
simulate_buffer_core = _default.simulate_buffer_core
