"""Combinatorial graph core: adjacency with deletions, triangles, matchings,
approximation subroutines, false twins, and the two cleaning procedures.

Graphs are immutable; every mutating operation returns a new graph.  Vertex
ids are stable across deletions.  Edges constrained to be hit (one endpoint
must join the solution) come in two flavors: `marked` edges form a matching,
`must_hit` edges may share endpoints.  Both are enforced by the DP layer.
"""

from __future__ import annotations

import itertools
from collections import deque


def _norm_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class HittingGraph:
    __slots__ = ("n", "alive", "_adj", "multiplicity", "marked", "must_hit", "twin_members")

    def __init__(self, n, alive, adj, multiplicity, marked, must_hit, twin_members=None):
        self.n = n
        self.alive = frozenset(alive)
        self._adj = tuple(frozenset(s) for s in adj)
        self.multiplicity = tuple(multiplicity)
        self.marked = frozenset(_norm_edge(*e) for e in marked)
        self.must_hit = frozenset(_norm_edge(*e) for e in must_hit)
        # rep -> sorted tuple of original vertices it stands for (rep included)
        self.twin_members = dict(twin_members) if twin_members else {}
        self._validate()

    def _validate(self):
        for v in self.alive:
            if v in self._adj[v]:
                raise ValueError(f"self-loop at {v}")
            for u in self._adj[v]:
                if v not in self._adj[u]:
                    raise ValueError("asymmetric adjacency")
        for (u, v) in self.marked | self.must_hit:
            if u not in self.alive or v not in self.alive or v not in self._adj[u]:
                raise ValueError(f"constraint edge ({u},{v}) is not a live edge")
        seen = set()
        for (u, v) in self.marked:
            if u in seen or v in seen:
                raise ValueError("marked edges must form a matching")
            seen.add(u)
            seen.add(v)

    @classmethod
    def from_edges(cls, n, edges, multiplicity=None, marked=(), must_hit=()):
        adj = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError("self-loop")
            adj[u].add(v)
            adj[v].add(u)
        mult = tuple(multiplicity) if multiplicity is not None else (1,) * n
        return cls(n, range(n), adj, mult, marked, must_hit)

    # -- accessors ---------------------------------------------------------

    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.alive))

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def edges(self):
        for u in sorted(self.alive):
            for v in sorted(self._adj[u]):
                if u < v:
                    yield (u, v)

    def edge_count(self) -> int:
        return sum(len(self._adj[v]) for v in self.alive) // 2

    def weight(self, vs) -> int:
        return sum(self.multiplicity[v] for v in vs)

    def constraint_edges(self) -> frozenset[tuple[int, int]]:
        return self.marked | self.must_hit

    def constrained_vertices(self) -> frozenset[int]:
        out = set()
        for u, v in self.constraint_edges():
            out.add(u)
            out.add(v)
        return frozenset(out)

    # -- mutation (copy-on-write) -------------------------------------------

    def _without(self, vs, marked, must_hit, twin_members=None):
        dead = set(vs)
        alive = self.alive - dead
        adj = [self._adj[v] - dead if v in alive else frozenset() for v in range(self.n)]
        return HittingGraph(self.n, alive, adj, self.multiplicity, marked, must_hit,
                            twin_members if twin_members is not None else self.twin_members)

    def remove_into_solution(self, vs):
        """Delete vertices that join the solution; their constraints are satisfied."""
        dead = set(vs)
        marked = {e for e in self.marked if not (e[0] in dead or e[1] in dead)}
        must = {e for e in self.must_hit if not (e[0] in dead or e[1] in dead)}
        return self._without(dead, marked, must)

    def remove_free(self, vs, twin_members=None):
        """Delete vertices that are known to be unnecessary for any solution."""
        dead = set(vs)
        if dead & self.constrained_vertices():
            raise ValueError("refusing to free-delete a constrained vertex")
        return self._without(dead, self.marked, self.must_hit, twin_members)

    def with_marked(self, extra):
        return HittingGraph(self.n, self.alive, self._adj, self.multiplicity,
                            self.marked | {_norm_edge(*e) for e in extra},
                            self.must_hit, self.twin_members)

    def with_must_hit(self, extra):
        return HittingGraph(self.n, self.alive, self._adj, self.multiplicity,
                            self.marked,
                            self.must_hit | {_norm_edge(*e) for e in extra},
                            self.twin_members)

    def with_multiplicity(self, mult, twin_members):
        return HittingGraph(self.n, self.alive, self._adj, tuple(mult),
                            self.marked, self.must_hit, twin_members)


# -- residual-graph properties -----------------------------------------------


def components(g: HittingGraph, removed=frozenset()) -> list[frozenset[int]]:
    todo = set(g.alive) - set(removed)
    out = []
    while todo:
        start = min(todo)
        comp = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for u in g.neighbors(v):
                if u in todo and u not in comp:
                    comp.add(u)
                    queue.append(u)
        todo -= comp
        out.append(frozenset(comp))
    return out


def triangle_free(g: HittingGraph, removed=frozenset()) -> bool:
    return find_triangle(g, removed) is None


def is_forest(g: HittingGraph, removed=frozenset()) -> bool:
    removed = set(removed)
    for comp in components(g, removed):
        m = sum(len(g.neighbors(v) - removed) for v in comp) // 2
        if m != len(comp) - 1:
            return False
    return True


def is_bipartite(g: HittingGraph, removed=frozenset()) -> bool:
    removed = set(removed)
    color = {}
    for v in sorted(g.alive - removed):
        if v in color:
            continue
        color[v] = 0
        queue = deque([v])
        while queue:
            x = queue.popleft()
            for u in g.neighbors(x):
                if u in removed:
                    continue
                if u not in color:
                    color[u] = 1 - color[x]
                    queue.append(u)
                elif color[u] == color[x]:
                    return False
    return True


# -- triangles and hitting-set subroutines ------------------------------------


def find_triangle(g: HittingGraph, removed=frozenset()):
    """Lexicographically smallest triangle on live vertices, or None."""
    removed = set(removed)
    for u in sorted(g.alive - removed):
        nu = sorted(x for x in g.neighbors(u) if x > u and x not in removed)
        for i, v in enumerate(nu):
            nv = g.neighbors(v)
            for w in nu[i + 1:]:
                if w in nv:
                    return (u, v, w)
    return None


def all_triangles(g: HittingGraph):
    for u in sorted(g.alive):
        nu = sorted(x for x in g.neighbors(u) if x > u)
        for i, v in enumerate(nu):
            nv = g.neighbors(v)
            for w in nu[i + 1:]:
                if w in nv:
                    yield (u, v, w)


def triangle_vertices(g: HittingGraph) -> frozenset[int]:
    out = set()
    for t in all_triangles(g):
        out.update(t)
    return frozenset(out)


def greedy_ths_3approx(g: HittingGraph) -> frozenset[int]:
    """Pick a triangle, take all three vertices, repeat.  3-approximate."""
    removed: set[int] = set()
    while True:
        t = find_triangle(g, removed)
        if t is None:
            return frozenset(removed)
        removed.update(t)


def _find_semidisjoint_cycle(adj):
    """A cycle whose vertices all have degree 2, except at most one."""
    visited = set()
    for s in sorted(adj):
        if len(adj[s]) != 2 or s in visited:
            continue
        # walk the degree-2 chain through s in both directions
        chain = [s]
        visited.add(s)
        ends = []
        for first in sorted(adj[s]):
            prev, cur = s, first
            while len(adj[cur]) == 2 and cur != s:
                visited.add(cur)
                if first == min(adj[s]):
                    chain.append(cur)
                else:
                    chain.insert(0, cur)
                nxt = [x for x in adj[cur] if x != prev]
                prev, cur = cur, nxt[0]
            if cur == s:
                return chain  # pure cycle of degree-2 vertices
            ends.append(cur)
        if ends[0] == ends[1]:
            return chain + [ends[0]]
    return None


def fvs_2approx(g: HittingGraph) -> frozenset[int]:
    """Local-ratio feedback vertex set (degree-weighted with semidisjoint
    cycles handled separately), followed by a reverse-delete pass."""
    adj = {v: set(g.neighbors(v)) for v in g.alive}

    def prune(a):
        queue = deque(v for v in a if len(a[v]) <= 1)
        while queue:
            v = queue.popleft()
            if v not in a:
                continue
            for u in a[v]:
                a[u].discard(v)
                if len(a[u]) <= 1:
                    queue.append(u)
            del a[v]

    prune(adj)
    w = {v: 1.0 for v in adj}
    stack = []
    while adj:
        cyc = _find_semidisjoint_cycle(adj)
        if cyc is not None:
            gamma = min(w[v] for v in cyc)
            for v in cyc:
                w[v] -= gamma
        else:
            gamma = min(w[v] / (len(adj[v]) - 1) for v in adj)
            for v in adj:
                w[v] -= gamma * (len(adj[v]) - 1)
        zero = sorted(v for v in adj if w[v] <= 1e-12)
        for v in zero:
            if v not in adj:
                continue
            stack.append(v)
            for u in adj[v]:
                adj[u].discard(v)
            del adj[v]
        prune(adj)

    fvs = set(stack)
    for v in reversed(stack):
        if is_forest(g, fvs - {v}):
            fvs.discard(v)
    return frozenset(fvs)


# -- matchings and covers ------------------------------------------------------


def maximal_matching(g: HittingGraph, vertices) -> frozenset[tuple[int, int]]:
    """Greedy inclusion-maximal matching inside the induced subgraph."""
    vs = set(vertices)
    used: set[int] = set()
    out = []
    for u in sorted(vs):
        if u in used:
            continue
        for v in sorted(g.neighbors(u)):
            if v in vs and v not in used and v != u:
                out.append(_norm_edge(u, v))
                used.add(u)
                used.add(v)
                break
    return frozenset(out)


def hopcroft_karp(left, right, edges) -> frozenset[tuple]:
    """Maximum-cardinality matching of a bipartite graph, as (left, right) pairs."""
    left = sorted(left)
    right = sorted(right)
    adj = {u: [] for u in left}
    rset = set(right)
    for u, v in edges:
        if v not in rset:
            raise ValueError("edge endpoint not in right side")
        adj[u].append(v)
    for u in adj:
        adj[u].sort()
    match_l = {u: None for u in left}
    match_r = {v: None for v in right}
    INF = float("inf")

    def bfs():
        dist = {}
        queue = deque()
        for u in left:
            if match_l[u] is None:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = INF
        found = INF
        while queue:
            u = queue.popleft()
            if dist[u] >= found:
                continue
            for v in adj[u]:
                nxt = match_r[v]
                if nxt is None:
                    found = dist[u] + 1
                elif dist[nxt] == INF:
                    dist[nxt] = dist[u] + 1
                    queue.append(nxt)
        return dist, found is not INF

    def dfs(u, dist):
        for v in adj[u]:
            nxt = match_r[v]
            if nxt is None or (dist.get(nxt) == dist[u] + 1 and dfs(nxt, dist)):
                match_l[u] = v
                match_r[v] = u
                return True
        dist[u] = INF
        return False

    while True:
        dist, more = bfs()
        if not more:
            break
        for u in left:
            if match_l[u] is None:
                dfs(u, dist)
    return frozenset((u, match_l[u]) for u in left if match_l[u] is not None)


def konig_vertex_cover(left, right, edges, matching) -> frozenset:
    """Minimum vertex cover from a maximum matching (Koenig).

    |cover| = |matching| and each matching edge touches exactly one cover
    vertex, which is what the crown construction relies on.
    """
    left = set(left)
    right = set(right)
    adj = {u: set() for u in left}
    for u, v in edges:
        adj[u].add(v)
    match_l = {u: v for u, v in matching}
    match_r = {v: u for u, v in matching}
    reach_l = {u for u in left if u not in match_l}
    reach_r: set = set()
    queue = deque(reach_l)
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in reach_r and match_l.get(u) != v:
                reach_r.add(v)
                w = match_r.get(v)
                if w is not None and w not in reach_l:
                    reach_l.add(w)
                    queue.append(w)
    return frozenset((left - reach_l) | reach_r)


def survivor_choices(clique) -> list[frozenset[int]]:
    """All ways to keep at most two vertices of a clique, smallest first."""
    vs = sorted(clique)
    out = [frozenset()]
    out.extend(frozenset((v,)) for v in vs)
    out.extend(frozenset(p) for p in itertools.combinations(vs, 2))
    return out


# -- false twins and cleaning --------------------------------------------------


def false_twin_classes(g: HittingGraph) -> list[tuple[int, ...]]:
    """Partition live vertices into maximal same-neighborhood classes.

    Vertices sharing an identical (open) neighborhood are automatically
    pairwise non-adjacent, since adjacency would force a self-loop.
    """
    by_nbhd: dict[frozenset[int], list[int]] = {}
    for v in sorted(g.alive):
        by_nbhd.setdefault(g.neighbors(v), []).append(v)
    classes = [tuple(vs) for vs in by_nbhd.values()]
    classes.sort(key=lambda c: c[0])
    return classes


def clean_for_ths(g: HittingGraph) -> HittingGraph:
    """Drop vertices that cannot participate in any triangle.

    Removes degree<2 vertices and vertices with an independent neighborhood,
    to a fixed point.  Endpoints of constraint edges always stay.
    """
    keep = g.constrained_vertices()
    while True:
        doomed = []
        for v in sorted(g.alive - keep):
            nb = sorted(g.neighbors(v))
            if len(nb) < 2:
                doomed.append(v)
                continue
            if not any(g.has_edge(a, b) for a, b in itertools.combinations(nb, 2)):
                doomed.append(v)
        if not doomed:
            return g
        g = g.remove_free(doomed)


def clean_for_fvs_oct(g: HittingGraph, problem: str) -> HittingGraph:
    """Degree-one cleanup plus false-twin collapse.

    Keeps one representative per twin class for fvs (multiplicity = class
    size) and two for oct (multiplicities split as ceil/floor of the class
    size).  A class is skipped when any member is constrained or adjacent to
    an already-collapsed representative: the DP cost rules are exact only
    when no two multiplicity-carrying representatives are adjacent.
    """
    if problem not in ("fvs", "oct"):
        raise ValueError(problem)
    keep = g.constrained_vertices()
    while True:
        doomed = [v for v in sorted(g.alive - keep) if g.degree(v) <= 1]
        if not doomed:
            break
        g = g.remove_free(doomed)

    mult = list(g.multiplicity)
    twin_members = dict(g.twin_members)
    reps: set[int] = set()
    doomed: set[int] = set()
    classes = sorted(false_twin_classes(g), key=lambda c: (-len(c), c[0]))
    kept_per_class = 1 if problem == "fvs" else 2
    for cls in classes:
        if len(cls) <= kept_per_class:
            continue
        if any(v in keep for v in cls):
            continue
        if g.neighbors(cls[0]) & reps:
            continue
        members = tuple(sorted(cls))
        if problem == "fvs":
            rep = members[0]
            mult[rep] = len(members)
            twin_members[rep] = members
            reps.add(rep)
            doomed.update(members[1:])
        else:
            half = (len(members) + 1) // 2
            r1, r2 = members[0], members[1]
            mult[r1] = half
            mult[r2] = len(members) - half
            twin_members[r1] = (r1,) + members[2:2 + half - 1]
            twin_members[r2] = (r2,) + members[2 + half - 1:]
            reps.update((r1, r2))
            doomed.update(members[2:])
    if doomed:
        g = g.remove_free(doomed, twin_members)
    return g.with_multiplicity(mult, twin_members)
