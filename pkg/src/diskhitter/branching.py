"""Two-step branching shared by all three hitting problems.

Step one branches on large cliques (at most two vertices of a clique can
survive any hitting solution) until, in geometric mode, no sample point of
the arrangement is covered p times, which certifies ply < p.  Step two picks
a vertex whose unmarked neighborhood holds a matching of size p and branches
on deleting the vertex versus marking all matching edges; marked edges are
consumed later by the DP as must-hit constraints.
"""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import Disk, candidate_points
from .graph import HittingGraph, maximal_matching, survivor_choices

GEOMETRIC = "geometric"
ROBUST = "robust"


@dataclass(frozen=True)
class HittingInstance:
    graph: HittingGraph
    k: int
    forced: frozenset[int]
    mode: str
    disks: tuple[Disk, ...] | None

    def __post_init__(self):
        if self.forced & self.graph.alive:
            raise ValueError("forced vertices must be deleted from the graph")
        if self.mode == GEOMETRIC and self.disks is None:
            raise ValueError("geometric instances need disks")

    def delete_into_solution(self, vs) -> "HittingInstance":
        vs = frozenset(vs)
        spent = self.graph.weight(vs)
        disks = None
        if self.disks is not None:
            disks = tuple(d for d in self.disks if d.id not in vs)
        return HittingInstance(self.graph.remove_into_solution(vs), self.k - spent,
                               self.forced | vs, self.mode, disks)


def make_instance(k, graph=None, disks=None, robust=False) -> HittingInstance:
    """Build the root instance from a graph, disks, or both."""
    from .geometry import intersection_edges

    if graph is None:
        if disks is None:
            raise ValueError("need a graph or disks")
        n = max((d.id for d in disks), default=-1) + 1
        graph = HittingGraph.from_edges(n, intersection_edges(disks))
    if robust or disks is None:
        return HittingInstance(graph, k, frozenset(), ROBUST, None)
    return HittingInstance(graph, k, frozenset(),
                           GEOMETRIC, tuple(sorted(disks, key=lambda d: d.id)))


def find_clique_geq(inst: HittingInstance, threshold: int):
    """A clique of size >= threshold, or None.

    Geometric mode returns the deepest common-point clique; when that is
    smaller than the threshold, the ply is certifiably below it.  Robust mode
    grows greedy cliques from every vertex in degree order; None certifies
    nothing sharp there, only that the greedy search saturated.
    """
    g = inst.graph
    if not g.alive:
        return None
    if inst.mode == GEOMETRIC:
        live = [d for d in inst.disks if d.id in g.alive]
        if not live:
            return None
        best = max(candidate_points(live), key=lambda p: p.depth)
        if best.depth >= threshold:
            return frozenset(best.coverers)
        return None
    for seed in sorted(g.alive, key=lambda v: (-g.degree(v), v)):
        clique = {seed}
        cands = set(g.neighbors(seed))
        while cands:
            u = max(sorted(cands), key=lambda x: len(g.neighbors(x) & cands))
            clique.add(u)
            cands &= g.neighbors(u)
        if len(clique) >= threshold:
            return frozenset(clique)
    return None


def branch_cliques(inst: HittingInstance, p: int):
    """Children cover the parent: any solution keeps at most two clique
    vertices, so branch over every surviving pair, singleton, and the empty
    choice.  Children that overdraw the budget are dropped silently."""
    if p < 3:
        raise ValueError("p must be at least 3")
    clique = find_clique_geq(inst, p)
    if clique is None:
        yield inst
        return
    for keep in survivor_choices(clique):
        doomed = clique - keep
        if inst.graph.weight(doomed) > inst.k:
            continue
        yield from branch_cliques(inst.delete_into_solution(doomed), p)


def _matching_pivot(inst: HittingInstance, p: int):
    g = inst.graph
    marked_ends = {v for e in g.marked for v in e}
    for v in sorted(g.alive):
        free_nbrs = {u for u in g.neighbors(v) if u not in marked_ends}
        if len(free_nbrs) < 2 * p:
            continue
        matching = maximal_matching(g, free_nbrs)
        if len(matching) >= p:
            return v, matching
    return None


def branch_matchings(inst: HittingInstance, p: int):
    """Either the pivot joins the solution, or one endpoint of each matching
    edge will; the second case only marks the edges and lets the DP decide."""
    hit = _matching_pivot(inst, p)
    if hit is None:
        yield inst
        return
    v, matching = hit
    if inst.k >= inst.graph.weight([v]):
        yield from branch_matchings(inst.delete_into_solution([v]), p)
    marked = inst.graph.marked | matching
    if len(marked) <= inst.k:  # disjoint marks each need a distinct deletion
        child = HittingInstance(inst.graph.with_marked(matching), inst.k,
                                inst.forced, inst.mode, inst.disks)
        yield from branch_matchings(child, p)


def run_two_step(inst: HittingInstance, p: int):
    """Clique branching followed by matching branching, lazily."""
    for mid in branch_cliques(inst, p):
        yield from branch_matchings(mid, p)
