import itertools
import random

import pytest

from diskhitter.geometry import Disk, intersection_edges
from diskhitter.graph import HittingGraph


def complete_graph(n):
    return HittingGraph.from_edges(n, list(itertools.combinations(range(n), 2)))


def cycle_graph(n):
    return HittingGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n):
    return HittingGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete_bipartite(a, b):
    return HittingGraph.from_edges(a + b, [(u, a + v) for u in range(a) for v in range(b)])


def gnp(n, p, seed, must_hit_count=0):
    rng = random.Random(seed)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    g = HittingGraph.from_edges(n, edges)
    if must_hit_count and edges:
        g = g.with_must_hit(rng.sample(edges, min(must_hit_count, len(edges))))
    return g


def disk_graph(disks):
    n = max((d.id for d in disks), default=-1) + 1
    return HittingGraph.from_edges(n, intersection_edges(disks))


def unit_disk(i, x, y, r=1.0):
    return Disk(i, float(x), float(y), float(r))


@pytest.fixture
def k4():
    return complete_graph(4)


@pytest.fixture
def c5():
    return cycle_graph(5)


@pytest.fixture
def c6():
    return cycle_graph(6)
