import itertools
import math

import numpy as np
import pytest

from diskhitter.geometry import (CliquePartition, Disk, candidate_points, clique_partition,
                                 disks_intersect, intersection_edges, ply)
from diskhitter.oracle import random_instance

from conftest import unit_disk


def grid_depth_max(disks, resolution=400):
    """Independent ply oracle: dense grid sampling over the bounding box."""
    xs = [d.cx - d.r for d in disks] + [d.cx + d.r for d in disks]
    ys = [d.cy - d.r for d in disks] + [d.cy + d.r for d in disks]
    gx = np.linspace(min(xs), max(xs), resolution)
    gy = np.linspace(min(ys), max(ys), resolution)
    mx, my = np.meshgrid(gx, gy)
    depth = np.zeros(mx.shape, dtype=int)
    for d in disks:
        depth += ((mx - d.cx) ** 2 + (my - d.cy) ** 2 <= d.r * d.r).astype(int)
    return int(depth.max())


def test_disks_intersect_basic():
    assert disks_intersect(unit_disk(0, 0, 0), unit_disk(1, 1, 0))
    assert not disks_intersect(unit_disk(0, 0, 0), unit_disk(1, 3, 0))


def test_disks_intersect_tangent_closed():
    assert disks_intersect(unit_disk(0, 0, 0), unit_disk(1, 2, 0))


def test_disks_intersect_symmetric():
    import random

    rng = random.Random(5)
    for _ in range(200):
        a = Disk(0, rng.uniform(0, 4), rng.uniform(0, 4), rng.uniform(0.1, 2))
        b = Disk(1, rng.uniform(0, 4), rng.uniform(0, 4), rng.uniform(0.1, 2))
        assert disks_intersect(a, b) == disks_intersect(b, a)


def test_invalid_disk():
    with pytest.raises(ValueError):
        Disk(0, 0, 0, 0)
    with pytest.raises(ValueError):
        Disk(-1, 0, 0, 1)


def test_candidate_points_single_disk():
    pts = candidate_points([unit_disk(0, 0, 0)])
    assert len(pts) == 1
    assert pts[0].depth == 1
    assert pts[0].coverers == {0}


def test_candidate_points_tangent_pair():
    pts = candidate_points([unit_disk(0, 0, 0), unit_disk(1, 2, 0)])
    # two centers plus the single tangency point
    assert len(pts) == 3
    tangency = [p for p in pts if p.depth == 2]
    assert len(tangency) == 1
    assert abs(tangency[0].x - 1.0) < 1e-9 and abs(tangency[0].y) < 1e-9


def test_unit_triangle_ply_three():
    disks = [unit_disk(0, 0, 0), unit_disk(1, 1, 0), unit_disk(2, 0.5, math.sqrt(3) / 2)]
    assert max(p.depth for p in candidate_points(disks)) == 3
    assert grid_depth_max(disks) == 3


def test_ply_disjoint():
    disks = [unit_disk(i, 3 * i, 0) for i in range(5)]
    assert ply(disks) == 1


def test_ply_cocentered():
    for k in (2, 4, 7):
        disks = [Disk(i, 0.0, 0.0, 1.0 + 0.05 * i) for i in range(k)]
        assert ply(disks) == k


def test_ply_matches_grid_oracle():
    # frozen seeds where the deepest region is wide enough for the grid
    for seed in (3, 11, 29):
        disks = random_instance(20, 4, seed)
        assert ply(disks) == grid_depth_max(disks, resolution=600)


def test_ply_at_least_grid_oracle():
    for seed in range(6):
        disks = random_instance(15, 3, 100 + seed)
        assert ply(disks) >= grid_depth_max(disks, resolution=300)


def test_clique_partition_cocentered():
    disks = [Disk(i, 0.0, 0.0, 1.0 + 0.1 * i) for i in range(8)]
    part = clique_partition(disks)
    assert len(part.cliques) == 1
    assert abs(part.weight - (math.log2(8) + 1)) < 1e-9


def test_clique_partition_disjoint():
    disks = [unit_disk(i, 3 * i, 0) for i in range(4)]
    part = clique_partition(disks)
    assert len(part.cliques) == 4
    assert abs(part.weight - 4.0) < 1e-9


def test_clique_partition_triangle_common_point():
    disks = [unit_disk(0, 0, 0), unit_disk(1, 1, 0), unit_disk(2, 0.5, math.sqrt(3) / 2)]
    part = clique_partition(disks)
    assert part.cliques == (frozenset({0, 1, 2}),)
    assert abs(part.weight - (math.log2(3) + 1)) < 1e-9


def test_clique_partition_invariants_random():
    for seed in range(10):
        disks = random_instance(18, 4, 200 + seed)
        by_id = {d.id: d for d in disks}
        part = clique_partition(disks)
        members = set()
        for clique, witness in zip(part.cliques, part.witnesses):
            assert clique, "empty clique"
            assert not (clique & members)
            members |= clique
            for u, v in itertools.combinations(sorted(clique), 2):
                assert disks_intersect(by_id[u], by_id[v])
            assert witness is not None
            for v in clique:
                assert by_id[v].contains_point(*witness)
        assert members == {d.id for d in disks}
        assert abs(part.weight - CliquePartition.weight_of(part.cliques)) < 1e-9
        assert part.weight <= len(disks) + 1e-9
        assert part.weight >= len(part.cliques) - 1e-9
        # the first emitted clique realizes the maximum depth
        assert ply(disks) >= max(len(c) for c in part.cliques)


def test_intersection_edges_matches_pairwise():
    for seed in range(5):
        disks = random_instance(15, 4, 300 + seed)
        by_id = {d.id: d for d in disks}
        want = {(u, v) for u in by_id for v in by_id if u < v
                and disks_intersect(by_id[u], by_id[v])}
        assert set(intersection_edges(disks)) == want
