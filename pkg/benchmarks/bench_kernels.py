"""Compare the compiled kernel lane against the pure-numpy/python fallback.

Runs matching, reachability, and buffer simulation on seeded synthetic
graphs through both lanes, checks they agree bit for bit, and prints a
timing table.  Compile time is excluded by a warm-up pass.

Usage: python benchmarks/bench_kernels.py [--num-src N] [--num-dst N]
       [--num-edges N] [--repeat K] [--seed S]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from graphbone import BufferConfig, gen_synthetic, na_trace_baseline
from graphbone.kernels import build_kernels


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--num-src", type=int, default=20000)
    ap.add_argument("--num-dst", type=int, default=4000)
    ap.add_argument("--num-edges", type=int, default=100000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=11)
    ap.add_argument("--capacity", type=int, default=512)
    args = ap.parse_args()

    g = gen_synthetic(args.num_src, args.num_dst, args.num_edges, kind="power", seed=args.seed)
    trace = na_trace_baseline(g)
    cfg = BufferConfig(capacity_vectors=args.capacity, policy="lru")
    print(
        f"graph: {g.num_src}x{g.num_dst}, {g.num_edges} edges; "
        f"trace: {trace.num_refs} refs; capacity {cfg.capacity_vectors}"
    )

    fast = build_kernels(use_numba=True)
    slow = build_kernels(use_numba=False)

    def match(k):
        return k.kuhn_match(g.fwd_indptr, g.fwd_indices, g.num_src, g.num_dst)

    def reach(k, partners):
        return k.alternating_reach(
            g.fwd_indptr, g.fwd_indices, partners[0], partners[1], g.num_src, g.num_dst
        )

    def sim(k):
        return k.simulate_buffer_core(
            trace.refs,
            trace.kinds,
            trace.num_vertices,
            cfg.capacity_vectors,
            False,
            False,
            trace.seg_bounds,
            trace.pin_refs,
            trace.pin_ptr,
        )

    # warm-up compiles the jitted lane and checks both lanes agree
    res_fast = match(fast)
    res_slow = match(slow)
    for a, b in zip(res_fast, res_slow):
        assert np.array_equal(np.asarray(a), np.asarray(b)), "matching lanes diverge"
    reach_fast = reach(fast, res_fast)
    reach_slow = reach(slow, res_slow)
    for a, b in zip(reach_fast, reach_slow):
        assert np.array_equal(a, b), "reachability lanes diverge"
    sim_fast = sim(fast)
    sim_slow = sim(slow)
    for a, b in zip(sim_fast, sim_slow):
        assert np.array_equal(np.asarray(a), np.asarray(b)), "simulator lanes diverge"
    print("lanes agree on all three kernels\n")

    rows = [
        ("kuhn_match", lambda: match(fast), lambda: match(slow)),
        ("alternating_reach", lambda: reach(fast, res_fast), lambda: reach(slow, res_fast)),
        ("simulate_buffer", lambda: sim(fast), lambda: sim(slow)),
    ]
    print(f"{'kernel':<20} {'numba (s)':>12} {'fallback (s)':>14} {'speedup':>9}")
    for name, f_fast, f_slow in rows:
        t_fast = _time(f_fast, args.repeat)
        t_slow = _time(f_slow, max(1, args.repeat // 3))
        ratio = t_slow / t_fast if t_fast > 0 else float("inf")
        print(f"{name:<20} {t_fast:>12.4f} {t_slow:>14.4f} {ratio:>8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
