import itertools
import random

import pytest

from diskhitter.graph import (HittingGraph, all_triangles, clean_for_fvs_oct, clean_for_ths,
                              false_twin_classes, find_triangle, fvs_2approx,
                              greedy_ths_3approx, hopcroft_karp, is_bipartite, is_forest,
                              konig_vertex_cover, maximal_matching, survivor_choices,
                              triangle_free)
from diskhitter.oracle import brute_force

from conftest import complete_bipartite, complete_graph, cycle_graph, gnp, path_graph


def test_graph_validation():
    with pytest.raises(ValueError):
        HittingGraph.from_edges(2, [(0, 0)])
    with pytest.raises(ValueError):
        HittingGraph.from_edges(3, [(0, 1), (1, 2)], marked=[(0, 1), (1, 2)])
    with pytest.raises(ValueError):
        HittingGraph.from_edges(3, [(0, 1)], marked=[(0, 2)])


def test_find_triangle():
    assert find_triangle(complete_graph(3)) == (0, 1, 2)
    assert find_triangle(cycle_graph(5)) is None
    assert find_triangle(complete_graph(4)) == (0, 1, 2)


def test_greedy_ths_triangle_free():
    assert greedy_ths_3approx(path_graph(5)) == frozenset()


def test_greedy_ths_k3():
    assert greedy_ths_3approx(complete_graph(3)) == {0, 1, 2}


def test_greedy_ths_two_triangles_ratio():
    g = HittingGraph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    got = greedy_ths_3approx(g)
    assert len(got) == 6
    assert brute_force("ths", g, 6).optimum == 2


def test_greedy_ths_always_hits():
    for seed in range(500):
        g = gnp(5 + seed % 8, 0.45, seed)
        got = greedy_ths_3approx(g)
        assert find_triangle(g, got) is None


def test_fvs_2approx_forest():
    assert fvs_2approx(path_graph(6)) == frozenset()


def test_fvs_2approx_cycle():
    g = cycle_graph(6)
    got = fvs_2approx(g)
    assert is_forest(g, got)
    assert len(got) <= 2
    assert brute_force("fvs", g, 6).optimum == 1


def test_fvs_2approx_k4():
    g = complete_graph(4)
    got = fvs_2approx(g)
    assert is_forest(g, got)
    assert len(got) <= 4
    assert brute_force("fvs", g, 4).optimum == 2


def test_fvs_2approx_ratio_random():
    for seed in range(60):
        g = gnp(6 + seed % 6, 0.35, 700 + seed)
        got = fvs_2approx(g)
        assert is_forest(g, got)
        opt = brute_force("fvs", g, len(g.alive)).optimum
        assert len(got) <= 2 * opt


def test_maximal_matching():
    ind = HittingGraph.from_edges(4, [])
    assert maximal_matching(ind, ind.alive) == frozenset()
    three = HittingGraph.from_edges(6, [(0, 1), (2, 3), (4, 5)])
    assert maximal_matching(three, three.alive) == {(0, 1), (2, 3), (4, 5)}
    p4 = path_graph(4)
    got = maximal_matching(p4, p4.alive)
    assert 1 <= len(got) <= 2
    inner = maximal_matching(p4, {1, 2})
    assert inner == {(1, 2)}


def test_maximal_matching_is_maximal():
    for seed in range(100):
        g = gnp(8, 0.3, 900 + seed)
        got = maximal_matching(g, g.alive)
        used = {v for e in got for v in e}
        for u, v in g.edges():
            assert u in used or v in used


def _max_matching_brute(left, right, edges):
    best = 0
    for size in range(min(len(left), len(right)), -1, -1):
        for combo in itertools.combinations(edges, size):
            ends = [x for e in combo for x in e]
            if len(ends) == len(set(ends)):
                return size
    return best


def test_hopcroft_karp_examples():
    assert hopcroft_karp([0, 1], [10, 11], []) == frozenset()
    got = hopcroft_karp([0, 1], [10, 11], [(0, 10), (0, 11), (1, 10), (1, 11)])
    assert len(got) == 2


def test_hopcroft_karp_random_vs_brute():
    for seed in range(60):
        rng = random.Random(seed)
        left = list(range(5))
        right = list(range(10, 15))
        edges = [(u, v) for u in left for v in right if rng.random() < 0.4]
        got = hopcroft_karp(left, right, edges)
        assert len(got) == _max_matching_brute(left, right, edges)


def _min_cover_brute(left, right, edges):
    nodes = list(left) + list(right)
    for size in range(len(nodes) + 1):
        for combo in itertools.combinations(nodes, size):
            chosen = set(combo)
            if all(u in chosen or v in chosen for u, v in edges):
                return size
    return len(nodes)


def test_konig_examples():
    left, right = [0, 1], [10, 11]
    edges = [(0, 10), (0, 11), (1, 10), (1, 11)]
    m = hopcroft_karp(left, right, edges)
    assert len(konig_vertex_cover(left, right, edges, m)) == 2
    star_edges = [(0, 10), (0, 11), (0, 12)]
    m = hopcroft_karp([0], [10, 11, 12], star_edges)
    assert konig_vertex_cover([0], [10, 11, 12], star_edges, m) == {0}


def test_konig_random():
    for seed in range(60):
        rng = random.Random(40 + seed)
        left = list(range(3))
        right = list(range(10, 13))
        edges = [(u, v) for u in left for v in right if rng.random() < 0.5]
        m = hopcroft_karp(left, right, edges)
        cover = konig_vertex_cover(left, right, edges, m)
        assert len(cover) == len(m) == _min_cover_brute(left, right, edges)
        assert all(u in cover or v in cover for u, v in edges)
        for u, v in m:
            assert (u in cover) != (v in cover)


def test_false_twin_classes():
    assert false_twin_classes(complete_graph(3)) == [(0,), (1,), (2,)]
    k23 = complete_bipartite(2, 3)
    assert sorted(false_twin_classes(k23)) == [(0, 1), (2, 3, 4)]
    p3 = path_graph(3)
    assert sorted(false_twin_classes(p3)) == [(0, 2), (1,)]


def test_false_twin_classes_property():
    for seed in range(50):
        g = gnp(9, 0.4, 1100 + seed)
        classes = false_twin_classes(g)
        seen = [v for c in classes for v in c]
        assert sorted(seen) == sorted(g.alive)
        for c in classes:
            for u, v in itertools.combinations(c, 2):
                assert g.neighbors(u) == g.neighbors(v)
                assert not g.has_edge(u, v)


def test_clean_for_ths():
    tree = path_graph(6)
    assert not clean_for_ths(tree).alive
    k3_pendant = HittingGraph.from_edges(4, [(0, 1), (0, 2), (1, 2), (2, 3)])
    assert clean_for_ths(k3_pendant).alive == {0, 1, 2}
    assert not clean_for_ths(cycle_graph(5)).alive


def test_clean_for_ths_keeps_constrained():
    g = path_graph(3).with_must_hit([(0, 1)])
    cleaned = clean_for_ths(g)
    assert {0, 1} <= cleaned.alive


def test_clean_for_fvs_oct_examples():
    assert not clean_for_fvs_oct(path_graph(5), "fvs").alive
    k24 = complete_bipartite(2, 4)
    gf = clean_for_fvs_oct(k24, "fvs")
    assert sorted(gf.alive) == [0, 1, 2]
    assert gf.multiplicity[2] == 4
    assert gf.twin_members[2] == (2, 3, 4, 5)
    go = clean_for_fvs_oct(k24, "oct")
    assert sorted(go.alive) == [0, 1, 2, 3]
    assert [go.multiplicity[v] for v in (2, 3)] == [2, 2]


def test_clean_preserves_answers_end_to_end():
    # cleaned instances carry multiplicities; equivalence is checked through
    # the DP (clean + solve against the oracle on the untouched graph)
    from diskhitter.decomposition import make_nice, robust_td
    from diskhitter.dp import solve_fvs_td, solve_oct_td

    for seed in range(40):
        g = gnp(10, 0.3, 1300 + seed)
        for problem, solver in (("fvs", solve_fvs_td), ("oct", solve_oct_td)):
            want = brute_force(problem, g, len(g.alive)).optimum
            cleaned = clean_for_fvs_oct(g, problem)
            got = solver(make_nice(robust_td(cleaned)), cleaned, len(g.alive))
            assert got is not None and got.cost == want


def test_survivor_choices():
    got = survivor_choices({3, 1, 2})
    assert got[0] == frozenset()
    assert len(got) == 1 + 3 + 3


def test_residual_checks():
    g = complete_graph(4)
    assert not triangle_free(g)
    assert triangle_free(g, {0, 1})
    assert not is_forest(g, {0})
    assert is_forest(g, {0, 1})
    assert not is_bipartite(cycle_graph(5))
    assert is_bipartite(cycle_graph(6))
