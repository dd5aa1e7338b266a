import math

import pytest

from diskhitter.decomposition import (BASE_CASE_SIZE, NiceTreeDecomposition, SeparatorNotFound,
                                      TreeDecomposition, balanced_separator, build_td,
                                      make_nice, plain_width, robust_td, validate_td,
                                      weighted_width, write_pace_td)
from diskhitter.geometry import CliquePartition, Disk
from diskhitter.oracle import random_instance

from conftest import complete_graph, cycle_graph, disk_graph, gnp, path_graph, unit_disk


def test_balanced_separator_already_balanced():
    disks = ([Disk(i, 0.0, 0.0, 1.0) for i in range(10)]
             + [Disk(i, 50.0, 0.0, 1.0) for i in range(10, 20)])
    g = disk_graph(disks)
    sep, part = balanced_separator(g, disks)
    assert sep == frozenset()
    assert part.cliques == ()


def test_balanced_separator_disk_path():
    disks = [Disk(i, 1.2 * i, 0.0, 1.0) for i in range(30)]
    g = disk_graph(disks)
    sep, part = balanced_separator(g, disks)
    assert part.weight <= 2.0 + 1e-9
    from diskhitter.graph import components

    assert all(len(c) <= 20 for c in components(g, sep))


def test_balanced_separator_random_weight():
    n = 200
    disks = random_instance(n, 3, 9_000_000)
    g = disk_graph(disks)
    sep, part = balanced_separator(g, disks)
    assert part.weight <= 4 * math.sqrt(n)


def test_build_td_single_vertex():
    disks = [unit_disk(0, 0, 0)]
    g = disk_graph(disks)
    td = build_td(g, disks)
    assert validate_td(g, td)
    assert td.bags == (frozenset({0}),)


def test_build_td_disjoint_triangles():
    disks = []
    for t in range(6):
        ox = 10.0 * t
        disks += [Disk(3 * t, ox, 0.0, 1.0), Disk(3 * t + 1, ox + 1, 0.0, 1.0),
                  Disk(3 * t + 2, ox + 0.5, 0.8, 1.0)]
    g = disk_graph(disks)
    td = build_td(g, disks)
    assert validate_td(g, td)
    assert max(len(b) for b in td.bags) <= max(3, BASE_CASE_SIZE)


def test_build_td_random_geometric():
    for seed in (1, 2, 3):
        disks = random_instance(100, 2, 9_100_000 + seed)
        g = disk_graph(disks)
        td = build_td(g, disks)
        assert td.mode == "geometric"
        assert validate_td(g, td)
        assert weighted_width(td) <= 4 * math.sqrt(100)
        for parent_n, child_n in td.balance_trace:
            assert 3 * child_n <= 2 * parent_n


def test_robust_td_tree():
    g = path_graph(7)
    td = robust_td(g)
    assert validate_td(g, td)
    assert plain_width(td) == 1


def test_robust_td_cycle():
    g = cycle_graph(6)
    td = robust_td(g)
    assert validate_td(g, td)
    assert plain_width(td) == 2


def test_robust_td_k5():
    g = complete_graph(5)
    td = robust_td(g)
    assert validate_td(g, td)
    assert plain_width(td) == 4
    top = max(range(len(td.bags)), key=lambda i: len(td.bags[i]))
    assert len(td.bag_partitions[top].cliques) == 1


def test_robust_td_random_valid():
    for seed in range(30):
        g = gnp(12, 0.3, 4000 + seed)
        td = robust_td(g)
        assert validate_td(g, td)


def test_validate_td_rejects_bad():
    g = path_graph(3)
    # edge (1,2) never co-resident
    bad_edges = TreeDecomposition(
        (-1, 0), (frozenset({0, 1}), frozenset({2})),
        (CliquePartition.from_cliques([{0, 1}]), CliquePartition.from_cliques([{2}])))
    assert not validate_td(g, bad_edges)
    # vertex 0 appears in two disconnected regions
    bad_conn = TreeDecomposition(
        (-1, 0, 1), (frozenset({0, 1}), frozenset({1, 2}), frozenset({0, 2})),
        tuple(CliquePartition.from_cliques([{v} for v in bag])
              for bag in ({0, 1}, {1, 2}, {0, 2})))
    assert not validate_td(g, bad_conn)
    # partition does not cover the bag
    bad_part = TreeDecomposition(
        (-1,), (frozenset({0, 1, 2}),), (CliquePartition.from_cliques([{0, 1}]),))
    assert not validate_td(g, bad_part)


def test_make_nice_single_bag_chain():
    g = complete_graph(4)
    td = TreeDecomposition(
        (-1,), (frozenset(range(4)),),
        (CliquePartition.from_cliques([{0, 1}, {2, 3}]),))
    assert validate_td(g, td)
    ntd = make_nice(td)
    kinds = [n.kind for n in ntd.nodes]
    assert kinds.count("leaf") == 1
    assert kinds.count("introduce") == 2
    assert kinds.count("forget") == 2
    assert ntd.nodes[ntd.root].cliques == frozenset()


def test_make_nice_shared_clique_persists():
    g = HittingGraph_from_bags()
    td = TreeDecomposition(
        (-1, 0),
        (frozenset({0, 1, 2}), frozenset({0, 1, 3})),
        (CliquePartition.from_cliques([{0, 1}, {2}]),
         CliquePartition.from_cliques([{0, 1}, {3}])))
    assert validate_td(g, td)
    ntd = make_nice(td)
    shared = frozenset({0, 1})
    present = [shared in n.cliques for n in ntd.nodes]
    assert any(present)
    # the shared clique is introduced once and forgotten once
    intro = sum(1 for n in ntd.nodes if n.kind == "introduce" and n.clique == shared)
    forget = sum(1 for n in ntd.nodes if n.kind == "forget" and n.clique == shared)
    assert intro == 1 and forget == 1


def HittingGraph_from_bags():
    from diskhitter.graph import HittingGraph

    return HittingGraph.from_edges(4, [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3)])


def test_make_nice_random_flatten_valid():
    for seed in range(60):
        g = gnp(11, 0.3, 4200 + seed)
        td = robust_td(g)
        ntd = make_nice(td)
        flat = ntd.flatten()
        assert validate_td(g, flat), seed
        for node in ntd.nodes:
            if node.kind == "join":
                a, b = node.children
                assert ntd.nodes[a].cliques == ntd.nodes[b].cliques == node.cliques
            elif node.kind == "introduce":
                (child,) = node.children
                assert node.cliques == ntd.nodes[child].cliques | {node.clique}
                assert node.clique not in ntd.nodes[child].cliques
            elif node.kind == "forget":
                (child,) = node.children
                assert node.cliques == ntd.nodes[child].cliques - {node.clique}
                assert node.clique in ntd.nodes[child].cliques
            else:
                assert node.cliques == frozenset()


def test_make_nice_geometric_flatten_valid_and_monotone():
    for seed in range(6):
        disks = random_instance(60, 3, 9_200_000 + seed)
        g = disk_graph(disks)
        td = build_td(g, disks)
        ntd = make_nice(td)
        assert validate_td(g, ntd.flatten())
        # separator units survive unchanged, so the nice width cannot grow
        assert ntd.weighted_width() <= weighted_width(td) + 1e-9


def test_weighted_width_values():
    g = complete_graph(4)
    td = TreeDecomposition((-1,), (frozenset(range(4)),),
                           (CliquePartition.from_cliques([{0, 1, 2, 3}]),))
    assert abs(weighted_width(td) - 3.0) < 1e-9
    td2 = TreeDecomposition((-1,), (frozenset(range(4)),),
                            (CliquePartition.from_cliques([{0}, {1}, {2}, {3}]),))
    assert abs(weighted_width(td2) - 4.0) < 1e-9


def test_pace_export(tmp_path):
    g = cycle_graph(5)
    td = robust_td(g)
    out = tmp_path / "out.td"
    write_pace_td(td, g, out)
    lines = out.read_text().strip().splitlines()
    assert lines[0] == f"s td {len(td.bags)} {max(len(b) for b in td.bags)} 5"
    bag_lines = [l for l in lines if l.startswith("b ")]
    assert len(bag_lines) == len(td.bags)
    edge_lines = [l for l in lines[1:] if not l.startswith("b ")]
    assert len(edge_lines) == len(td.bags) - 1
