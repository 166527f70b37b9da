"""Backbone selection (both modes) and subgraph generation."""

import numpy as np
import pytest

from graphbone import (
    ConfigError,
    ContractError,
    gen_synthetic,
    generate_subgraphs,
    max_matching,
    select_backbone,
    select_backbone_konig,
    select_backbone_paper,
    serialize_partition,
    verify_cover,
)
from graphbone.backbone import Partition

from conftest import make_graph


def classes(p):
    return (
        p.src_in.tolist(),
        p.src_out.tolist(),
        p.dst_in.tolist(),
        p.dst_out.tolist(),
    )


def test_star_konig_backbone(star):
    p = select_backbone_konig(star, max_matching(star))
    assert classes(p) == ([0], [], [], [0, 1, 2])
    assert p.backbone_size == 1
    assert verify_cover(star, p) == 0


def test_star_paper_backbone(star):
    p = select_backbone_paper(star, max_matching(star))
    assert classes(p) == ([0], [], [], [0, 1, 2])
    assert verify_cover(star, p) == 0


def test_four_cycle_modes_diverge(four_cycle):
    m = max_matching(four_cycle)
    konig = select_backbone_konig(four_cycle, m)
    assert classes(konig) == ([0, 1], [], [], [0, 1])
    assert verify_cover(four_cycle, konig) == 0

    paper = select_backbone_paper(four_cycle, m)
    assert classes(paper) == ([], [0, 1], [], [0, 1])
    assert verify_cover(four_cycle, paper) == 4


def test_path_konig_covers_via_shared_destination(path3):
    p = select_backbone_konig(path3, max_matching(path3))
    assert verify_cover(path3, p) == 0
    assert p.backbone_size == 2


def test_konig_certificate_on_random_graphs():
    for seed in range(40):
        kind = "power" if seed % 2 else "uniform"
        g = gen_synthetic(120, 90, 700, kind=kind, seed=seed)
        m = max_matching(g)
        p = select_backbone_konig(g, m)
        assert verify_cover(g, p) == 0
        assert p.backbone_size == m.size
        # the four classes tile both vertex sets
        assert sorted(p.src_in.tolist() + p.src_out.tolist()) == list(range(g.num_src))
        assert sorted(p.dst_in.tolist() + p.dst_out.tolist()) == list(range(g.num_dst))


def test_paper_mode_never_misclassifies_into_both():
    for seed in range(20):
        g = gen_synthetic(50, 50, 300, seed=seed)
        p = select_backbone_paper(g, max_matching(g))
        assert not set(p.src_in.tolist()) & set(p.src_out.tolist())
        assert not set(p.dst_in.tolist()) & set(p.dst_out.tolist())


def test_select_backbone_mode_dispatch(star):
    m = max_matching(star)
    assert select_backbone(star, m, "konig").mode == "konig"
    assert select_backbone(star, m, "paper-literal").mode == "paper-literal"
    with pytest.raises(ConfigError):
        select_backbone(star, m, "hungarian")


# subgraph generation


def test_star_triple_routes_everything_to_g3(star):
    t = generate_subgraphs(star, select_backbone_konig(star, max_matching(star)))
    assert [s.graph.num_edges for s in t.subgraphs()] == [0, 0, 3]
    assert t.uncovered_edges == 0
    assert t.g3.src_map.tolist() == [0]
    assert t.g3.dst_map.tolist() == [0, 1, 2]
    assert t.g3.stationary_side == "src"
    assert t.g3.stationary_size == 1
    assert t.max_stationary_size == 1


def test_g1_compaction_and_stationary_side():
    g = make_graph([(0, 0), (1, 0)])
    t = generate_subgraphs(g, select_backbone_konig(g, max_matching(g)))
    assert t.g1.graph.num_edges == 2
    assert t.g1.stationary_side == "dst"
    assert t.g1.stationary_size == 1
    assert t.g1.dst_map.tolist() == [0]


def test_four_cycle_paper_literal_routes_uncovered_to_g2(four_cycle):
    m = max_matching(four_cycle)
    t = generate_subgraphs(four_cycle, select_backbone_paper(four_cycle, m))
    assert t.uncovered_edges == 4
    assert t.g2.graph.num_edges == 4  # nothing dropped
    assert t.g1.graph.num_edges == 0 and t.g3.graph.num_edges == 0


def test_konig_uncovered_edge_is_a_contract_violation(single_edge):
    bogus = Partition(
        num_src=1,
        num_dst=1,
        src_in=np.empty(0, dtype=np.int64),
        src_out=np.array([0]),
        dst_in=np.empty(0, dtype=np.int64),
        dst_out=np.array([0]),
        mode="konig",
    )
    with pytest.raises(ContractError):
        generate_subgraphs(single_edge, bogus)


def test_partition_bijectivity_on_random_graphs():
    for seed in range(30):
        g = gen_synthetic(100, 80, 600, kind="power" if seed % 3 else "uniform", seed=seed)
        t = generate_subgraphs(g, select_backbone_konig(g, max_matching(g)))
        parts = [s.parent_edges() for s in t.subgraphs()]
        es = np.concatenate([p[0] for p in parts])
        ed = np.concatenate([p[1] for p in parts])
        assert es.size == g.num_edges
        order = np.lexsort((ed, es))
        assert np.array_equal(es[order], g.src)
        assert np.array_equal(ed[order], g.dst)


def test_g2_never_contains_matched_edges():
    # a matched edge inside src_in x dst_in would put both cover endpoints
    # on one edge, contradicting |cover| == |matching|
    for seed in range(25):
        g = gen_synthetic(70, 70, 450, seed=seed)
        m = max_matching(g)
        t = generate_subgraphs(g, select_backbone_konig(g, m))
        es, ed = t.g2.parent_edges()
        for u, v in zip(es.tolist(), ed.tolist()):
            assert m.src_partner[u] != v


def test_nonempty_dst_in_implies_nonempty_g1():
    for seed in range(25):
        g = gen_synthetic(60, 60, 350, kind="power", seed=seed)
        p = select_backbone_konig(g, max_matching(g))
        t = generate_subgraphs(g, p)
        if p.dst_in.size:
            assert t.g1.graph.num_edges > 0


def test_remap_tables_strictly_increasing():
    g = gen_synthetic(90, 70, 500, seed=5)
    t = generate_subgraphs(g, select_backbone_konig(g, max_matching(g)))
    for s in t.nonempty():
        assert np.all(np.diff(s.src_map) > 0)
        assert np.all(np.diff(s.dst_map) > 0)
        assert s.graph.num_src == s.src_map.size
        assert s.graph.num_dst == s.dst_map.size


def test_serialize_partition_golden(star):
    p = select_backbone_konig(star, max_matching(star))
    assert serialize_partition(p) == (
        "mode: konig\n"
        "num_src: 1\n"
        "num_dst: 3\n"
        "src_in: 0\n"
        "src_out:\n"
        "dst_in:\n"
        "dst_out: 0 1 2\n"
    )
