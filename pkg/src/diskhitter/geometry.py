"""Closed-disk primitives: intersection predicates, arrangement sample points,
ply, and common-point clique partitions.

All predicates use double precision with a symmetric slack of GEOM_EPS on
squared-distance comparisons.  Instance generation keeps coordinates at least
1e-6 away from tangency and triple-point degeneracies, so the slack cannot
flip a predicate on generated inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

GEOM_EPS = 1e-9


@dataclass(frozen=True)
class Disk:
    id: int
    cx: float
    cy: float
    r: float

    def __post_init__(self):
        if self.r <= 0:
            raise ValueError(f"disk {self.id}: radius must be positive")
        if self.id < 0:
            raise ValueError("disk ids must be nonnegative")

    def contains_point(self, x: float, y: float) -> bool:
        return (x - self.cx) ** 2 + (y - self.cy) ** 2 <= self.r * self.r + GEOM_EPS


@dataclass(frozen=True)
class CandidatePoint:
    x: float
    y: float
    depth: int
    coverers: frozenset[int]


@dataclass(frozen=True)
class CliquePartition:
    """Partition of a vertex set into cliques, weighted by sum(log2|C| + 1).

    In geometric mode every clique comes with a witness point contained in
    all of its disks; combinatorial partitions carry None witnesses.
    """

    cliques: tuple[frozenset[int], ...]
    weight: float
    witnesses: tuple[tuple[float, float] | None, ...] = ()

    @staticmethod
    def weight_of(cliques) -> float:
        return sum(math.log2(len(c)) + 1.0 for c in cliques)

    @classmethod
    def from_cliques(cls, cliques, witnesses=None) -> "CliquePartition":
        cliques = tuple(frozenset(c) for c in cliques)
        if witnesses is None:
            witnesses = tuple(None for _ in cliques)
        return cls(cliques, cls.weight_of(cliques), tuple(witnesses))

    def members(self) -> frozenset[int]:
        out: set[int] = set()
        for c in self.cliques:
            out |= c
        return frozenset(out)


def disks_intersect(a: Disk, b: Disk) -> bool:
    """Closed-disk intersection: tangent disks do intersect."""
    dx = a.cx - b.cx
    dy = a.cy - b.cy
    rr = a.r + b.r
    return dx * dx + dy * dy <= rr * rr + GEOM_EPS


def intersection_edges(disks) -> list[tuple[int, int]]:
    """All intersecting pairs, as (id, id) with id ordering, vectorized."""
    ds = sorted(disks, key=lambda d: d.id)
    n = len(ds)
    if n < 2:
        return []
    cx = np.array([d.cx for d in ds])
    cy = np.array([d.cy for d in ds])
    r = np.array([d.r for d in ds])
    d2 = (cx[:, None] - cx[None, :]) ** 2 + (cy[:, None] - cy[None, :]) ** 2
    rr2 = (r[:, None] + r[None, :]) ** 2
    ii, jj = np.nonzero(d2 <= rr2 + GEOM_EPS)
    return [(ds[i].id, ds[j].id) for i, j in zip(ii, jj) if i < j]


def _boundary_intersections(a: Disk, b: Disk) -> list[tuple[float, float]]:
    """Intersection points of the two boundary circles (0, 1, or 2 points)."""
    dx = b.cx - a.cx
    dy = b.cy - a.cy
    d2 = dx * dx + dy * dy
    if d2 <= GEOM_EPS:
        return []  # concentric: boundaries are disjoint or identical
    sum_r = a.r + b.r
    diff_r = a.r - b.r
    if d2 > sum_r * sum_r + GEOM_EPS or d2 < diff_r * diff_r - GEOM_EPS:
        return []
    d = math.sqrt(d2)
    along = (d2 + a.r * a.r - b.r * b.r) / (2.0 * d)
    h2 = a.r * a.r - along * along
    px = a.cx + along * dx / d
    py = a.cy + along * dy / d
    if h2 <= GEOM_EPS:
        return [(px, py)]  # tangency collapses to a single point
    h = math.sqrt(h2)
    ox = -dy / d * h
    oy = dx / d * h
    return [(px + ox, py + oy), (px - ox, py - oy)]


def candidate_points(disks) -> list[CandidatePoint]:
    """Disk centers plus all pairwise boundary intersections, with coverage.

    The maximum depth over these points equals the ply of the arrangement:
    a deepest face is either bounded by arcs meeting at a circle-circle
    vertex, or it contains a whole disk and hence that disk's center.
    """
    ds = sorted(disks, key=lambda d: d.id)
    if not ds:
        raise ValueError("candidate_points: empty disk set")
    pts: list[tuple[float, float]] = [(d.cx, d.cy) for d in ds]
    for i in range(len(ds)):
        for j in range(i + 1, len(ds)):
            if disks_intersect(ds[i], ds[j]):
                pts.extend(_boundary_intersections(ds[i], ds[j]))

    px = np.array([p[0] for p in pts])
    py = np.array([p[1] for p in pts])
    cx = np.array([d.cx for d in ds])
    cy = np.array([d.cy for d in ds])
    r2 = np.array([d.r * d.r for d in ds])
    inside = (px[:, None] - cx[None, :]) ** 2 + (py[:, None] - cy[None, :]) ** 2 <= r2[None, :] + GEOM_EPS

    ids = [d.id for d in ds]
    out = []
    for k, (x, y) in enumerate(pts):
        cov = frozenset(ids[i] for i in np.nonzero(inside[k])[0])
        out.append(CandidatePoint(x, y, len(cov), cov))
    return out


def ply(disks) -> int:
    """Maximum number of disks containing a common point."""
    return max(p.depth for p in candidate_points(disks))


def clique_partition(disks) -> CliquePartition:
    """Greedy common-point cover: repeatedly take the deepest residual point.

    Every emitted clique keeps its witness point; each disk's own center
    covers at least itself, so the loop always terminates.
    """
    ds = sorted(disks, key=lambda d: d.id)
    if not ds:
        raise ValueError("clique_partition: empty disk set")
    points = candidate_points(ds)
    remaining = set(d.id for d in ds)
    cliques: list[frozenset[int]] = []
    witnesses: list[tuple[float, float]] = []
    while remaining:
        best = None
        best_count = 0
        for p in points:
            c = len(p.coverers & remaining)
            if c > best_count:
                best = p
                best_count = c
        clique = frozenset(best.coverers & remaining)
        cliques.append(clique)
        witnesses.append((best.x, best.y))
        remaining -= clique
    return CliquePartition.from_cliques(cliques, witnesses)
