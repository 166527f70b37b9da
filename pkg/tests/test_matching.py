"""Matching kernel: frozen small cases, brute-force oracle, event counts."""

import numpy as np
import pytest

from graphbone import (
    ConfigError,
    ContractError,
    SemanticGraph,
    brute_force_matching_size,
    decoupler_event_counts,
    gen_synthetic,
    match_with_events,
    max_matching,
    serialize_matching,
)

from conftest import make_graph


def pair_set(m):
    return set(map(tuple, m.pairs().tolist()))


def test_single_edge_matched(single_edge):
    m = max_matching(single_edge)
    assert m.size == 1
    assert pair_set(m) == {(0, 0)}


def test_star_matches_first_destination(star):
    m = max_matching(star)
    assert m.size == 1
    assert pair_set(m) == {(0, 0)}


def test_path_saturates_both_sources(path3):
    m = max_matching(path3)
    assert m.size == 2
    assert pair_set(m) == {(0, 0), (1, 1)}


def test_four_cycle_augments_through_first_pair(four_cycle):
    # seed order: s0 takes d0, then s1 reclaims d0 by pushing s0 to d1
    m = max_matching(four_cycle)
    assert m.size == 2
    assert pair_set(m) == {(0, 1), (1, 0)}


def test_matching_is_consistent_on_random_graphs():
    for seed in range(15):
        g = gen_synthetic(60, 45, 300, kind="power" if seed % 2 else "uniform", seed=seed)
        m = max_matching(g)
        m.check_consistent(g)  # raises on any violation


def test_check_consistent_rejects_corruption(path3):
    m = max_matching(path3)
    bad = type(m)(src_partner=m.src_partner.copy(), dst_partner=m.dst_partner.copy())
    bad.src_partner[0] = 1  # both sources now claim d1, and (0,1) is a non-edge
    with pytest.raises(ContractError):
        bad.check_consistent(path3)


# event counts (frozen by hand simulation of the augmenting search)


def test_events_single_edge(single_edge):
    _, ev = match_with_events(single_edge)
    assert (ev.pushes, ev.pops) == (1, 0)
    assert ev.lookups == single_edge.num_src + ev.pushes


def test_events_star(star):
    _, ev = match_with_events(star)
    assert (ev.pushes, ev.pops) == (1, 0)


def test_events_count_rematch():
    # s1 steals d0; s0 rematches to d1: pushes d0 (s0), d0 (s1), d1 (s0)
    g = make_graph([(0, 0), (0, 1), (1, 0)])
    m, ev = match_with_events(g)
    assert m.size == 2
    assert ev.pushes == 3
    assert ev.pops == 1
    assert ev.lookups == g.num_src + ev.pushes


def test_lookup_identity_on_random_graphs():
    for seed in range(10):
        g = gen_synthetic(80, 80, 400, seed=seed)
        _, ev = match_with_events(g)
        assert ev.lookups == g.num_src + ev.pushes


def test_event_total_weighting(star):
    ev = decoupler_event_counts(star)
    assert ev.total() == ev.pushes + ev.pops + ev.lookups
    weighted = ev.total(push_weight=2, pop_weight=3, lookup_weight=5)
    assert weighted == 2 * ev.pushes + 3 * ev.pops + 5 * ev.lookups


# brute-force oracle


def test_brute_force_fixture_sizes(single_edge, star, path3, four_cycle, k23, k33):
    assert brute_force_matching_size(single_edge) == 1
    assert brute_force_matching_size(star) == 1
    assert brute_force_matching_size(path3) == 2
    assert brute_force_matching_size(four_cycle) == 2
    assert brute_force_matching_size(k23) == 2
    assert brute_force_matching_size(k33) == 3


def test_brute_force_refuses_large_inputs():
    g = gen_synthetic(6, 6, 30, seed=0)
    with pytest.raises(ConfigError):
        brute_force_matching_size(g)


def test_matching_agrees_with_oracle_on_small_graphs():
    rng = np.random.default_rng(77)
    for _ in range(150):
        ns = int(rng.integers(1, 7))
        nd = int(rng.integers(1, 7))
        ne = int(rng.integers(1, min(24, ns * nd) + 1))
        g = gen_synthetic(ns, nd, ne, seed=int(rng.integers(0, 2**31)))
        assert max_matching(g).size == brute_force_matching_size(g)


def test_empty_graph_matches_nothing(empty_graph):
    m, ev = match_with_events(empty_graph)
    assert m.size == 0
    assert (ev.pushes, ev.pops, ev.lookups) == (0, 0, 0)
    assert brute_force_matching_size(empty_graph) == 0


def test_serialize_matching_golden(path3):
    m = max_matching(path3)
    assert serialize_matching(m) == "size: 2\npairs:\n0 0\n1 1\n"
