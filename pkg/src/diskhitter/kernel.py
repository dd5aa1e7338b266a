"""Core construction and crown-decomposition kernelization for triangle
hitting.

A core is a set of triangles such that every triangle of the graph shares at
least two vertices with a core member.  Vertices that lie in triangles but
in no core triangle form the fringe; edges completing triangles with fringe
vertices are the anchor edges.  When the fringe outnumbers the anchor edges,
a Koenig vertex cover of their incidence graph yields a crown: the surviving
fringe can be deleted outright once every anchor edge is constrained to be
hit.
"""

from __future__ import annotations

from dataclasses import dataclass

from .branching import HittingInstance
from .graph import (HittingGraph, all_triangles, greedy_ths_3approx, hopcroft_karp,
                    konig_vertex_cover, maximal_matching, triangle_vertices)


class CorePropertyViolated(RuntimeError):
    pass


@dataclass(frozen=True)
class Core:
    triangles: tuple[tuple[int, int, int], ...]

    def vertices(self) -> frozenset[int]:
        return frozenset(v for t in self.triangles for v in t)

    def pairs(self) -> frozenset[tuple[int, int]]:
        out = set()
        for a, b, c in self.triangles:
            out.update(((a, b), (a, c), (b, c)))
        return frozenset(out)


@dataclass(frozen=True)
class Crown:
    fringe: frozenset[int]  # deletable vertices, pairwise triangle-disjoint
    anchor_edges: frozenset[tuple[int, int]]  # edges that must be hit instead
    matching: frozenset[tuple[int, tuple[int, int]]]  # saturates anchor_edges


def compute_core(inst: HittingInstance) -> Core | None:
    """Greedy-anchored core; None when the greedy hitting set already
    certifies a NO instance (more than 3k deletions needed)."""
    g = inst.graph
    greedy = greedy_ths_3approx(g)
    if g.weight(greedy) > 3 * inst.k:
        return None
    anchor = set(greedy) | g.constrained_vertices()
    triangles: list[tuple[int, int, int]] = []
    seen = set()

    def add(a, b, c):
        t = tuple(sorted((a, b, c)))
        if t not in seen:
            seen.add(t)
            triangles.append(t)

    for x in sorted(anchor):
        for y in sorted(g.neighbors(x) & anchor):
            if y < x:
                continue
            common = g.neighbors(x) & g.neighbors(y)
            outside = sorted(common - anchor)
            if outside:
                add(x, y, outside[0])
            elif common:
                # no apex outside the anchor set; any apex still covers
                # triangles lying entirely inside it
                add(x, y, sorted(common)[0])
    for v in sorted(anchor):
        for a, b in sorted(maximal_matching(g, g.neighbors(v) - anchor)):
            add(v, a, b)
    return Core(tuple(triangles))


def verify_core(g: HittingGraph, core: Core) -> bool:
    """Exhaustive check: every triangle shares two vertices with the core."""
    pairs = core.pairs()
    for a, b, c in all_triangles(g):
        if not ((a, b) in pairs or (a, c) in pairs or (b, c) in pairs):
            return False
    return True


def compute_IH(g: HittingGraph, core: Core):
    """Fringe vertices and anchor edges of the core.

    Fringe: in some triangle of the graph, in no core triangle, and not an
    endpoint of a constraint edge (those must stay deletable-never).  Anchor
    edges: edges forming a triangle with a fringe vertex; the core property
    forces both endpoints of each anchor edge into one core triangle.
    """
    in_triangle = triangle_vertices(g)
    core_vertices = core.vertices()
    fringe = frozenset(in_triangle - core_vertices - g.constrained_vertices())
    anchors = set()
    for x in sorted(fringe):
        nbrs = sorted(g.neighbors(x))
        for i, u in enumerate(nbrs):
            nu = g.neighbors(u)
            for v in nbrs[i + 1:]:
                if v in nu:
                    anchors.add((u, v))
    member_sets = [frozenset(t) for t in core.triangles]
    for u, v in sorted(anchors):
        if not any({u, v} <= t for t in member_sets):
            raise CorePropertyViolated(f"anchor edge ({u},{v}) outside every core triangle")
    return fringe, frozenset(anchors)


def find_crown(g: HittingGraph, fringe, anchor_edges) -> Crown | None:
    """Koenig-cover crown when the fringe outnumbers the anchor edges."""
    if len(fringe) <= len(anchor_edges):
        return None
    edges = []
    for x in sorted(fringe):
        nx = g.neighbors(x)
        for (u, v) in sorted(anchor_edges):
            if u in nx and v in nx:
                edges.append((x, (u, v)))
    matching = hopcroft_karp(sorted(fringe), sorted(anchor_edges), edges)
    cover = konig_vertex_cover(sorted(fringe), sorted(anchor_edges), edges, matching)
    kept_fringe = frozenset(fringe) - cover
    kept_anchors = frozenset(anchor_edges) & cover
    kept_matching = frozenset((x, e) for x, e in matching
                              if x in kept_fringe or e in kept_anchors)
    if not kept_fringe:
        return None
    return Crown(kept_fringe, kept_anchors, kept_matching)


def apply_crown(inst: HittingInstance, crown: Crown) -> HittingInstance:
    """Delete the fringe; constrain every anchor edge to be hit."""
    g = inst.graph.with_must_hit(crown.anchor_edges)
    g = g.remove_free(crown.fringe)
    return HittingInstance(g, inst.k, inst.forced, inst.mode,
                           None if inst.disks is None else
                           tuple(d for d in inst.disks if d.id in g.alive))


def kernelize_ths(inst: HittingInstance) -> HittingInstance | None:
    """Crown reductions to a fixed point, then drop triangle-free vertices.

    Returns None when the instance is certifiably NO.  The loop strictly
    shrinks the vertex set, so it runs at most n times.
    """
    for _ in range(len(inst.graph.alive) ** 2 + 1):
        core = compute_core(inst)
        if core is None:
            return None
        fringe, anchors = compute_IH(inst.graph, core)
        crown = find_crown(inst.graph, fringe, anchors)
        if crown is None:
            break
        inst = apply_crown(inst, crown)
    g = inst.graph
    keep = triangle_vertices(g) | g.constrained_vertices()
    if keep != g.alive:
        g = g.remove_free(g.alive - keep)
        inst = HittingInstance(g, inst.k, inst.forced, inst.mode,
                               None if inst.disks is None else
                               tuple(d for d in inst.disks if d.id in g.alive))
    return inst
