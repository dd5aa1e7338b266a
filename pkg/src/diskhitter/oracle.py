"""Independent brute-force solvers and the seeded instance generator.

These are the ground truth for every equivalence suite: increasing-budget
search that branches on a violated structure (an unhit constraint edge, a
triangle, a shortest cycle, or a shortest odd cycle).  Pruned and unpruned
search are cross-checked on small fixtures.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import deque
from dataclasses import dataclass

from .geometry import GEOM_EPS, Disk, _boundary_intersections, disks_intersect
from .graph import HittingGraph, is_bipartite, is_forest, triangle_free

MAX_ORACLE_VERTICES = 26


class TooLarge(ValueError):
    pass


class GenerationStalled(RuntimeError):
    pass


@dataclass
class OracleResult:
    optimum: float  # integer, or math.inf when above the search cap
    witness: frozenset[int] | None
    enumerated: int


def _violated_constraint(g, chosen):
    for u, v in sorted(g.constraint_edges()):
        if u not in chosen and v not in chosen:
            return (u, v)
    return None


def _shortest_cycle(g, removed):
    """A shortest cycle in the residual graph, as a vertex tuple, or None."""
    best = None
    live = sorted(g.alive - removed)
    for s in live:
        parent = {s: None}
        depth = {s: 0}
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for u in sorted(g.neighbors(v)):
                if u in removed:
                    continue
                if u not in depth:
                    depth[u] = depth[v] + 1
                    parent[u] = v
                    queue.append(u)
                elif parent[v] != u and parent[u] != v:
                    # closes a cycle through s's BFS tree
                    pa, pb = v, u
                    path_a, path_b = [v], [u]
                    while depth[pa] > depth[pb]:
                        pa = parent[pa]
                        path_a.append(pa)
                    while depth[pb] > depth[pa]:
                        pb = parent[pb]
                        path_b.append(pb)
                    while pa != pb:
                        pa = parent[pa]
                        pb = parent[pb]
                        path_a.append(pa)
                        path_b.append(pb)
                    cyc = tuple(dict.fromkeys(path_a + path_b[::-1]))
                    if best is None or len(cyc) < len(best):
                        best = cyc
        if best is not None and len(best) == 3:
            break
    return best


def _odd_cycle(g, removed):
    """An odd cycle from a BFS 2-coloring conflict, or None if bipartite."""
    color = {}
    parent = {}
    for s in sorted(g.alive - removed):
        if s in color:
            continue
        color[s] = 0
        parent[s] = None
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for u in sorted(g.neighbors(v)):
                if u in removed:
                    continue
                if u not in color:
                    color[u] = 1 - color[v]
                    parent[u] = v
                    queue.append(u)
                elif color[u] == color[v]:
                    pa, pb = v, u
                    path_a, path_b = [v], [u]
                    seen_a = {v}
                    while pa is not None:
                        pa = parent[pa]
                        if pa is not None:
                            path_a.append(pa)
                            seen_a.add(pa)
                    while path_b[-1] not in seen_a:
                        path_b.append(parent[path_b[-1]])
                    meet = path_b[-1]
                    path_a = path_a[:path_a.index(meet) + 1]
                    return tuple(dict.fromkeys(path_a + path_b[::-1]))
    return None


def _violating_structure(problem, g, removed):
    if problem == "ths":
        t = _find_triangle(g, removed)
        return t
    if problem == "fvs":
        return _shortest_cycle(g, removed)
    if problem == "oct":
        return _odd_cycle(g, removed)
    raise ValueError(problem)


def _find_triangle(g, removed):
    from .graph import find_triangle

    return find_triangle(g, removed)


def brute_force(problem, g: HittingGraph, k_max) -> OracleResult:
    """Exact optimum up to k_max (math.inf beyond), with a witness.

    Search is by increasing multiplicity-weighted budget; at each node it
    branches on the vertices of one violated structure.
    """
    if len(g.alive) > MAX_ORACLE_VERTICES:
        raise TooLarge(f"oracle guard: {len(g.alive)} > {MAX_ORACLE_VERTICES}")
    counter = [0]

    def search(chosen, budget):
        counter[0] += 1
        edge = _violated_constraint(g, chosen)
        if edge is not None:
            for v in edge:
                cost = g.multiplicity[v]
                if cost <= budget:
                    got = search(chosen | {v}, budget - cost)
                    if got is not None:
                        return got
            return None
        bad = _violating_structure(problem, g, chosen)
        if bad is None:
            return chosen
        for v in bad:
            cost = g.multiplicity[v]
            if cost <= budget:
                got = search(chosen | {v}, budget - cost)
                if got is not None:
                    return got
        return None

    cap = int(k_max)
    for budget in range(cap + 1):
        got = search(frozenset(), budget)
        if got is not None:
            return OracleResult(g.weight(got), frozenset(got), counter[0])
    return OracleResult(math.inf, None, counter[0])


def exhaustive_scan(problem, g: HittingGraph, k_max) -> OracleResult:
    """Flat scan over all vertex subsets; only for cross-checking the oracle."""
    live = sorted(g.alive)
    if len(live) > 16:
        raise TooLarge("exhaustive_scan is for small fixtures only")
    check = {"ths": triangle_free, "fvs": is_forest, "oct": is_bipartite}[problem]
    best, witness, seen = math.inf, None, 0
    for size in range(len(live) + 1):
        for combo in itertools.combinations(live, size):
            seen += 1
            chosen = frozenset(combo)
            cost = g.weight(chosen)
            if cost > k_max or cost >= best:
                continue
            if _violated_constraint(g, chosen) is not None:
                continue
            if check(g, chosen):
                best, witness = cost, chosen
    return OracleResult(best, witness, seen)


# -- instance generation -------------------------------------------------------

_R_MIN, _R_MAX = 0.02, 0.3
_DEGENERACY_MARGIN = 1e-6
_MAX_REJECTIONS = 100_000


def random_instance(n, target_ply, seed) -> tuple[Disk, ...]:
    """Disk-by-disk rejection sampling keeping the running ply <= target_ply.

    Uniform centers in the unit square, log-uniform radii; deterministic for
    a fixed seed.  Disks landing within 1e-6 of a tangency or a triple
    boundary point are rejected, which keeps the geometric predicates clear
    of their tolerance.  Raises GenerationStalled after the rejection budget.
    """
    import numpy as np

    if n < 1 or target_ply < 1:
        raise ValueError("n and target_ply must be positive")
    rng = random.Random(seed)
    accepted: list[Disk] = []
    acx = np.empty(0)
    acy = np.empty(0)
    ar = np.empty(0)
    pts = np.empty((0, 2))  # running arrangement sample points
    depths = np.empty(0, dtype=np.int64)
    hot = np.empty((0, 2))  # points already at the target depth
    rejections = 0
    while len(accepted) < n:
        cx, cy = rng.random(), rng.random()
        r = math.exp(rng.uniform(math.log(_R_MIN), math.log(_R_MAX)))
        cand = Disk(len(accepted), cx, cy, r)
        if len(hot) and bool(
                ((hot[:, 0] - cx) ** 2 + (hot[:, 1] - cy) ** 2 <= r * r + GEOM_EPS).any()):
            ok = None  # would push a maximum-depth point over the target
        else:
            ok = _try_add(cand, accepted, acx, acy, ar, pts, depths, target_ply, np)
        if ok is None:
            rejections += 1
            if rejections >= _MAX_REJECTIONS:
                raise GenerationStalled(
                    f"gave up after {rejections} rejections (n={n}, ply={target_ply})")
            continue
        new_pts, new_depths, bumped = ok
        accepted.append(cand)
        acx = np.append(acx, cx)
        acy = np.append(acy, cy)
        ar = np.append(ar, r)
        pts = np.vstack([pts, new_pts])
        depths = np.concatenate([bumped, new_depths])
        hot = pts[depths >= target_ply]
    return tuple(accepted)


def _try_add(cand, accepted, acx, acy, ar, pts, depths, target_ply, np):
    """Depth bookkeeping for one tentative disk; None when it must be rejected."""
    cx, cy, r = cand.cx, cand.cy, cand.r
    if accepted:
        dist = np.hypot(acx - cx, acy - cy)
        if np.any(np.abs(dist - (ar + r)) < _DEGENERACY_MARGIN):
            return None  # near outer tangency
        if np.any(np.abs(dist - np.abs(ar - r)) < _DEGENERACY_MARGIN):
            return None  # near inner tangency
        touching = np.nonzero(dist * dist <= (ar + r) ** 2 + GEOM_EPS)[0]
    else:
        touching = []
    new_pts = [(cx, cy)]
    partners = [-1]
    for i in touching:
        for xy in _boundary_intersections(cand, accepted[i]):
            new_pts.append(xy)
            partners.append(int(i))
    new_xy = np.array(new_pts)
    if accepted:
        pdist = np.hypot(new_xy[:, 0:1] - acx[None, :], new_xy[:, 1:2] - acy[None, :])
        # triple-point margin: a new boundary point must stay clear of every
        # boundary except the two circles that created it
        near = np.abs(pdist - ar[None, :]) < _DEGENERACY_MARGIN
        for pi, di in zip(*np.nonzero(near)):
            if partners[pi] != di:
                return None
        depth_new = (pdist * pdist <= ar[None, :] ** 2 + GEOM_EPS).sum(axis=1) + 1
    else:
        depth_new = np.ones(len(new_pts), dtype=np.int64)
    if len(pts):
        inside = (pts[:, 0] - cx) ** 2 + (pts[:, 1] - cy) ** 2 <= r * r + GEOM_EPS
        bumped = depths + inside.astype(np.int64)
    else:
        bumped = depths
    top = int(depth_new.max())
    if len(bumped):
        top = max(top, int(bumped.max()))
    if top > target_ply:
        return None
    return new_xy, depth_new.astype(np.int64), bumped
