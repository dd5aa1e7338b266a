"""Dynamic programs over nice tree decompositions with clique-unit bags.

All three solvers share the state skeleton: a bag state keeps at most two
surviving vertices per clique unit (any hitting solution deletes the rest),
and deleted vertices pay their multiplicity.  Residual edges are processed
exactly once each:

  * triangle checks (ths) happen when a clique is introduced, since every
    triangle of the graph lies inside some bag;
  * forest bookkeeping (fvs) processes an edge when its first endpoint is
    forgotten, which keeps the processed edge sets of join children disjoint
    and makes the block-merge join exact;
  * 2-coloring checks (oct) happen at introduces and are idempotent.

Constraint edges (marked or must-hit) reject a state at the forget of their
first endpoint when both endpoints are still surviving.

A surviving twin-class representative with multiplicity m pays m-1 at its
forget when it has kept two or more residual neighbors (the class then
cannot stay whole); with at most one kept neighbor the whole class survives
for free.  The per-state neighbor counters live in the state key.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass

from .decomposition import NiceTreeDecomposition
from .graph import HittingGraph, survivor_choices

DEFAULT_STATE_CAP = 1 << 22
STATE_CAP_ENV = "DISKHITTER_STATE_CAP"


class WidthOverflow(RuntimeError):
    pass


def state_cap() -> int:
    raw = os.environ.get(STATE_CAP_ENV)
    return int(raw) if raw else DEFAULT_STATE_CAP


@dataclass(frozen=True)
class BagState:
    survivors: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...] | None = None  # fvs
    colors: tuple[tuple[int, int], ...] | None = None  # oct


@dataclass
class DPResult:
    cost: int
    deleted: frozenset[int]
    charged: frozenset[int]  # fvs reps that survived but pay m-1
    tables: dict | None = None

    def solution_on(self, g: HittingGraph) -> frozenset[int]:
        """Expand collapsed twin representatives back to original vertices."""
        out: set[int] = set()
        for v in self.deleted:
            out.update(g.twin_members.get(v, (v,)))
        for v in self.charged:
            members = g.twin_members.get(v, (v,))
            out.update(m for m in members if m != v)
        return frozenset(out)


def enumerate_bag_states(bag_partition, problem: str) -> list[BagState]:
    """All states of a bag: at most two survivors per clique, with the
    per-problem annotation (forest blocks for fvs, colors for oct)."""
    cliques = sorted((tuple(sorted(c)) for c in _cliques_of(bag_partition)))
    per_clique = [survivor_choices(c) for c in cliques]
    states = []
    for combo in itertools.product(*per_clique) if cliques else [()]:
        survivors = tuple(sorted(v for part in combo for v in part))
        if problem == "ths":
            states.append(BagState(survivors))
        elif problem == "fvs":
            for part in _set_partitions(survivors):
                states.append(BagState(survivors, blocks=part))
        elif problem == "oct":
            for colors in itertools.product((1, 2), repeat=len(survivors)):
                ok = True
                for choice in combo:
                    pair = sorted(choice)
                    if len(pair) == 2:
                        ca = colors[survivors.index(pair[0])]
                        cb = colors[survivors.index(pair[1])]
                        if ca == cb:
                            ok = False
                if ok:
                    states.append(BagState(survivors, colors=tuple(zip(survivors, colors))))
        else:
            raise ValueError(problem)
    return states


def _cliques_of(bag_partition):
    if hasattr(bag_partition, "cliques"):
        return bag_partition.cliques
    return bag_partition


def _set_partitions(items):
    items = list(items)
    if not items:
        return [()]
    out = []

    def rec(i, blocks):
        if i == len(items):
            out.append(tuple(sorted(tuple(sorted(b)) for b in blocks)))
            return
        v = items[i]
        for b in blocks:
            b.append(v)
            rec(i + 1, blocks)
            b.pop()
        blocks.append([v])
        rec(i + 1, blocks)
        blocks.pop()

    rec(0, [])
    return out


# -- rank-based reduction --------------------------------------------------------


def rank_reduce(rows: dict) -> dict:
    """Representative subset of partition-keyed rows.

    Rows map a partition (tuple of sorted tuples) of a fixed ground set to a
    cost.  The kept subset guarantees: for every completion partition q, the
    minimum cost over rows whose join with q is the single-block partition is
    achieved by a kept row.  Standard cut-matrix Gaussian elimination over
    GF(2), scanning rows by increasing cost.
    """
    if len(rows) <= 1:
        return dict(rows)
    ground = sorted({v for part in rows for b in part for v in b})
    if not ground:
        key = min(rows, key=rows.get)
        return {key: rows[key]}
    anchor, rest = ground[0], ground[1:]
    cuts = []
    for bits in range(1 << len(rest)):
        side = {anchor} | {rest[i] for i in range(len(rest)) if bits >> i & 1}
        cuts.append(frozenset(side))

    def row_vector(part):
        vec = 0
        for j, side in enumerate(cuts):
            if all(set(b) <= side or not (set(b) & side) for b in part):
                vec |= 1 << j
        return vec

    kept: dict = {}
    pivots: dict[int, int] = {}
    for part in sorted(rows, key=lambda p: (rows[p], p)):
        vec = row_vector(part)
        cur = vec
        for bit, basis in sorted(pivots.items(), reverse=True):
            if cur >> bit & 1:
                cur ^= basis
        if cur:
            pivots[cur.bit_length() - 1] = cur
            kept[part] = rows[part]
    return kept


# -- shared transition helpers ----------------------------------------------------


def _choices(clique):
    return survivor_choices(clique)


def _constraint_reject(g, leaving_survivors, survivors_after, all_survivors):
    """True when forgetting these survivors violates a marked/must-hit edge."""
    for u in leaving_survivors:
        for a, b in g.constraint_edges():
            if u == a and b in all_survivors:
                return True
            if u == b and a in all_survivors:
                return True
    return False


class _Table:
    """cost and backpointer per state key, with budget and cap pruning."""

    def __init__(self, budget, cap):
        self.data: dict = {}
        self.budget = budget
        self.cap = cap

    def offer(self, key, cost, back):
        if cost > self.budget:
            return
        cur = self.data.get(key)
        if cur is None or cost < cur[0]:
            self.data[key] = (cost, back)
            if len(self.data) > self.cap:
                raise WidthOverflow(f"state table exceeded {self.cap} entries")


def _run(ntd: NiceTreeDecomposition, handlers, budget, cap):
    tables: dict[int, _Table] = {}
    kept: dict[int, dict] = {}
    for idx, node in enumerate(ntd.nodes):
        table = _Table(budget, cap)
        if node.kind == "leaf":
            handlers["leaf"](table)
        elif node.kind == "introduce":
            handlers["introduce"](table, node, tables[node.children[0]])
        elif node.kind == "forget":
            handlers["forget"](table, node, tables[node.children[0]])
        elif node.kind == "join":
            handlers["join"](table, node, tables[node.children[0]], tables[node.children[1]])
        else:
            raise ValueError(node.kind)
        tables[idx] = table
        kept[idx] = dict(table.data)
    return tables[ntd.root], kept


def _reconstruct(ntd, tables_needed, root_key, collect):
    """Walk backpointers from the root, calling collect(node, key, back)."""
    stack = [(ntd.root, root_key)]
    while stack:
        idx, key = stack.pop()
        node = ntd.nodes[idx]
        entry = tables_needed[idx].get(key)
        back = entry[1]
        collect(node, key, back)
        if node.kind == "introduce" or node.kind == "forget":
            stack.append((node.children[0], back[0]))
        elif node.kind == "join":
            stack.append((node.children[0], back[0]))
            stack.append((node.children[1], back[1]))
    return


# -- triangle hitting set ----------------------------------------------------------


def solve_ths_td(ntd: NiceTreeDecomposition, g: HittingGraph, budget,
                 cap=None, keep_tables=False) -> DPResult | None:
    """Minimum multiplicity-weighted triangle hitting set within the budget."""
    cap = cap if cap is not None else state_cap()

    def leaf(table):
        table.offer(frozenset(), 0, None)

    def introduce(table, node, child):
        clique = node.clique
        for key, (cost, _) in child.data.items():
            for keep in _choices(clique):
                new_key = key | keep
                if _creates_triangle(g, keep, key):
                    continue
                extra = g.weight(clique - keep)
                table.offer(new_key, cost + extra, (key, keep))

    def forget(table, node, child):
        clique = node.clique
        for key, (cost, _) in child.data.items():
            leaving = key & clique
            if _constraint_reject(g, leaving, key - clique, key):
                continue
            table.offer(key - clique, cost, (key,))

    def join(table, node, t1, t2):
        bag = _bag_of(node.cliques)
        for key, (c1, _) in t1.data.items():
            hit = t2.data.get(key)
            if hit is None:
                continue
            c2 = hit[0]
            dup = g.weight(bag - key)
            table.offer(key, c1 + c2 - dup, (key, key))

    handlers = {"leaf": leaf, "introduce": introduce, "forget": forget, "join": join}
    root_table, kept = _run(ntd, handlers, budget, cap)
    entry = root_table.data.get(frozenset())
    if entry is None:
        return None
    deleted: set[int] = set()

    def collect(node, key, back):
        if node.kind == "introduce":
            deleted.update(node.clique - back[1])

    _reconstruct(ntd, kept, frozenset(), collect)
    tables = {i: {k: v[0] for k, v in t.items()} for i, t in kept.items()} if keep_tables else None
    return DPResult(entry[0], frozenset(deleted), frozenset(), tables)


def _bag_of(cliques) -> frozenset[int]:
    out: set[int] = set()
    for c in cliques:
        out |= c
    return frozenset(out)


def _creates_triangle(g, new_survivors, old_survivors) -> bool:
    allv = sorted(old_survivors | new_survivors)
    for a in sorted(new_survivors):
        for u, v in itertools.combinations(allv, 2):
            if a in (u, v):
                continue
            if g.has_edge(a, u) and g.has_edge(a, v) and g.has_edge(u, v):
                return True
    return False


# -- feedback vertex set -------------------------------------------------------------


def _merge_blocks(blocks, edges):
    """Union blocks along edges; None when an edge closes a cycle."""
    parent = {b: b for b in blocks}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    owner = {}
    for b in blocks:
        for v in b:
            owner[v] = b
    for u, v in edges:
        ru, rv = find(owner[u]), find(owner[v])
        if ru == rv:
            return None
        parent[ru] = rv
    grouped: dict = {}
    for b in blocks:
        grouped.setdefault(find(b), []).append(b)
    return tuple(sorted(tuple(sorted(v for blk in bs for v in blk)) for bs in grouped.values()))


def _join_partitions(p1, p2, allow_cycles=False):
    """Merge two partitions of the same ground set.

    Treats every element as an edge between its block in p1 and its block in
    p2; a cycle in that bipartite graph means the union of the two residual
    forests has a cycle.
    """
    parent: dict = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for b in p1:
        parent[("a", b)] = ("a", b)
    for b in p2:
        parent[("b", b)] = ("b", b)
    block1 = {v: b for b in p1 for v in b}
    block2 = {v: b for b in p2 for v in b}
    for v in block1:
        ra, rb = find(("a", block1[v])), find(("b", block2[v]))
        if ra == rb:
            if not allow_cycles:
                return None
            continue
        parent[ra] = rb
    grouped: dict = {}
    for b in p1:
        grouped.setdefault(find(("a", b)), set()).update(b)
    for b in p2:
        grouped.setdefault(find(("b", b)), set()).update(b)
    return tuple(sorted(tuple(sorted(vs)) for vs in grouped.values()))


def solve_fvs_td(ntd: NiceTreeDecomposition, g: HittingGraph, budget,
                 cap=None, keep_tables=False, use_rank_reduce=False) -> DPResult | None:
    if use_rank_reduce:
        return _solve_fvs_rank(ntd, g, budget, cap)
    cap = cap if cap is not None else state_cap()
    watched = frozenset(v for v in g.alive if g.multiplicity[v] >= 2)

    def leaf(table):
        table.offer((frozenset(), (), ()), 0, None)

    def introduce(table, node, child):
        clique = node.clique
        for (surv, blocks, counters), (cost, _) in child.data.items():
            for keep in _choices(clique):
                new_surv = surv | keep
                new_blocks = tuple(sorted(blocks + tuple((v,) for v in sorted(keep))))
                fresh = keep & watched
                if fresh:
                    d = dict(counters)
                    for v in fresh:
                        d.setdefault(v, 0)
                    new_counters = tuple(sorted(d.items()))
                else:
                    new_counters = counters
                extra = g.weight(clique - keep)
                table.offer((new_surv, new_blocks, new_counters), cost + extra,
                            ((surv, blocks, counters), keep))

    def forget(table, node, child):
        clique = node.clique
        for (surv, blocks, counters), (cost, _) in child.data.items():
            leaving = surv & clique
            if _constraint_reject(g, leaving, surv - clique, surv):
                continue
            edges = []
            for u in sorted(leaving):
                for v in sorted(g.neighbors(u) & surv):
                    if v in leaving and v < u:
                        continue
                    edges.append((u, v))
            merged = _merge_blocks(blocks, edges)
            if merged is None:
                continue
            charge = 0
            charged_now = []
            cdict = dict(counters)
            for u, v in edges:
                if u in cdict:
                    cdict[u] = min(2, cdict[u] + 1)
                if v in cdict:
                    cdict[v] = min(2, cdict[v] + 1)
            for u in sorted(leaving):
                if u in cdict:
                    if cdict[u] >= 2:
                        charge += g.multiplicity[u] - 1
                        charged_now.append(u)
                    del cdict[u]
            new_counters = tuple(sorted(cdict.items()))
            new_blocks = tuple(sorted(tuple(sorted(set(b) - leaving)) for b in merged
                                      if set(b) - leaving))
            table.offer((surv - clique, new_blocks, new_counters), cost + charge,
                        ((surv, blocks, counters), tuple(charged_now)))

    def join(table, node, t1, t2):
        bag = _bag_of(node.cliques)
        by_surv: dict = {}
        for key in t2.data:
            by_surv.setdefault(key[0], []).append(key)
        for key1, (c1, _) in t1.data.items():
            surv, blocks1, counters1 = key1
            dup = g.weight(bag - surv)
            for key2 in by_surv.get(surv, ()):
                _, blocks2, counters2 = key2
                merged = _join_partitions(blocks1, blocks2)
                if merged is None:
                    continue
                c2 = t2.data[key2][0]
                cd = dict(counters1)
                for v, c in counters2:
                    cd[v] = min(2, cd.get(v, 0) + c)
                table.offer((surv, merged, tuple(sorted(cd.items()))),
                            c1 + c2 - dup, (key1, key2))

    handlers = {"leaf": leaf, "introduce": introduce, "forget": forget, "join": join}
    root_table, kept = _run(ntd, handlers, budget, cap)
    root_key = (frozenset(), (), ())
    entry = root_table.data.get(root_key)
    if entry is None:
        return None
    deleted: set[int] = set()
    charged: set[int] = set()

    def collect(node, key, back):
        if node.kind == "introduce":
            deleted.update(node.clique - back[1])
        elif node.kind == "forget":
            charged.update(back[1])

    _reconstruct(ntd, kept, root_key, collect)
    tables = {i: {k: v[0] for k, v in t.items()} for i, t in kept.items()} if keep_tables else None
    return DPResult(entry[0], frozenset(deleted), frozenset(charged), tables)


# -- feedback vertex set, rank-based route -------------------------------------------

_V0 = -1


def _solve_fvs_rank(ntd, g, budget, cap):
    """Connectivity reformulation: a universal vertex may link to any survivor
    (the choice is made at the survivor's forget), states track the processed
    edge count minus forgotten survivors, and a residual forest is exactly a
    completion ending connected to the universal vertex with zero excess.
    Partition rows are pruned by rank_reduce per (survivors, excess, counters).
    """
    cap = cap if cap is not None else state_cap()

    def leaf(table):
        table.offer((frozenset(), ((_V0,),), 0, ()), 0, None)

    def introduce(table, node, child):
        clique = node.clique
        for (surv, blocks, excess, counters), (cost, _) in child.data.items():
            for keep in _choices(clique):
                new_surv = surv | keep
                new_blocks = tuple(sorted(blocks + tuple((v,) for v in sorted(keep))))
                fresh = [v for v in sorted(keep) if g.multiplicity[v] >= 2]
                if fresh:
                    d = dict(counters)
                    for v in fresh:
                        d.setdefault(v, 0)
                    new_counters = tuple(sorted(d.items()))
                else:
                    new_counters = counters
                extra = g.weight(clique - keep)
                table.offer((new_surv, new_blocks, excess, new_counters), cost + extra,
                            ((surv, blocks, excess, counters), keep))

    def forget(table, node, child):
        clique = node.clique
        for (surv, blocks, excess, counters), (cost, _) in child.data.items():
            leaving = surv & clique
            if _constraint_reject(g, leaving, surv - clique, surv):
                continue
            edges = []
            for u in sorted(leaving):
                for v in sorted(g.neighbors(u) & surv):
                    if v in leaving and v < u:
                        continue
                    edges.append((u, v))
            cdict = dict(counters)
            for u, v in edges:
                if u in cdict:
                    cdict[u] = min(2, cdict[u] + 1)
                if v in cdict:
                    cdict[v] = min(2, cdict[v] + 1)
            charge = 0
            charged_now = []
            for u in sorted(leaving):
                if u in cdict:
                    if cdict[u] >= 2:
                        charge += g.multiplicity[u] - 1
                        charged_now.append(u)
                    del cdict[u]
            new_counters = tuple(sorted(cdict.items()))
            merged_blocks, _ = _merge_blocks_loose(blocks, edges)
            # each leaving survivor may or may not take an edge to the
            # universal vertex
            for linked in _subsets(sorted(leaving)):
                blocks2, _ = _merge_blocks_loose(merged_blocks, [(_V0, u) for u in linked])
                sealed_dead = False
                final_blocks = []
                for b in blocks2:
                    rest = tuple(v for v in b if v not in leaving)
                    if not rest:
                        sealed_dead = True  # a component cut off from the universal vertex
                        break
                    final_blocks.append(rest)
                if sealed_dead:
                    continue
                new_excess = excess + len(edges) + len(linked) - len(leaving)
                table.offer((surv - clique, tuple(sorted(final_blocks)), new_excess,
                             new_counters), cost + charge,
                            ((surv, blocks, excess, counters), tuple(charged_now)))

    def join(table, node, t1, t2):
        bag = _bag_of(node.cliques)
        by_surv: dict = {}
        for key in t2.data:
            by_surv.setdefault(key[0], []).append(key)
        for key1, (c1, _) in t1.data.items():
            surv, blocks1, excess1, counters1 = key1
            dup = g.weight(bag - surv)
            for key2 in by_surv.get(surv, ()):
                _, blocks2, excess2, counters2 = key2
                merged = _join_partitions(blocks1, blocks2, allow_cycles=True)
                cd = dict(counters1)
                for v, c in counters2:
                    cd[v] = min(2, cd.get(v, 0) + c)
                c2 = t2.data[key2][0]
                table.offer((surv, merged, excess1 + excess2, tuple(sorted(cd.items()))),
                            c1 + c2 - dup, (key1, key2))

    def reduce_table(table):
        groups: dict = {}
        for key in table.data:
            surv, blocks, excess, counters = key
            groups.setdefault((surv, excess, counters), {})[blocks] = table.data[key][0]
        slim = {}
        for (surv, excess, counters), rows in groups.items():
            for blocks in rank_reduce(rows):
                key = (surv, blocks, excess, counters)
                slim[key] = table.data[key]
        table.data = slim

    tables: dict[int, _Table] = {}
    kept: dict[int, dict] = {}
    for idx, node in enumerate(ntd.nodes):
        table = _Table(budget, cap)
        if node.kind == "leaf":
            leaf(table)
        elif node.kind == "introduce":
            introduce(table, node, tables[node.children[0]])
        elif node.kind == "forget":
            forget(table, node, tables[node.children[0]])
        else:
            join(table, node, tables[node.children[0]], tables[node.children[1]])
        reduce_table(table)
        tables[idx] = table
        kept[idx] = dict(table.data)
    root_entries = [(key, v) for key, v in tables[ntd.root].data.items()
                    if key[0] == frozenset() and key[2] == 0]
    if not root_entries:
        return None
    root_key, entry = min(root_entries, key=lambda kv: kv[1][0])
    deleted: set[int] = set()
    charged: set[int] = set()

    def collect(node, key, back):
        if node.kind == "introduce":
            deleted.update(node.clique - back[1])
        elif node.kind == "forget":
            charged.update(back[1])

    _reconstruct(ntd, kept, root_key, collect)
    return DPResult(entry[0], frozenset(deleted), frozenset(charged), None)


def _merge_blocks_loose(blocks, edges):
    """Union blocks along edges, counting cycle-closing edges instead of
    rejecting them."""
    parent = {b: b for b in blocks}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    owner = {}
    for b in blocks:
        for v in b:
            owner[v] = b
    cycles = 0
    for u, v in edges:
        ru, rv = find(owner[u]), find(owner[v])
        if ru == rv:
            cycles += 1
            continue
        parent[ru] = rv
    grouped: dict = {}
    for b in blocks:
        grouped.setdefault(find(b), []).append(b)
    merged = tuple(sorted(tuple(sorted(v for blk in bs for v in blk)) for bs in grouped.values()))
    return merged, cycles


def _subsets(items):
    for size in range(len(items) + 1):
        yield from itertools.combinations(items, size)


# -- odd cycle transversal -------------------------------------------------------------


def solve_oct_td(ntd: NiceTreeDecomposition, g: HittingGraph, budget,
                 cap=None, keep_tables=False) -> DPResult | None:
    """Minimum multiplicity-weighted odd cycle transversal within the budget.

    States are survivor 2-colorings; adjacent survivors must differ.
    """
    cap = cap if cap is not None else state_cap()

    def leaf(table):
        table.offer(frozenset(), 0, None)

    def introduce(table, node, child):
        clique = node.clique
        for key, (cost, _) in child.data.items():
            color_of = dict(key)
            for keep in _choices(clique):
                keep_list = sorted(keep)
                palettes = []
                if len(keep_list) == 0:
                    palettes = [()]
                elif len(keep_list) == 1:
                    palettes = [(1,), (2,)]
                else:
                    palettes = [(1, 2), (2, 1)]
                for palette in palettes:
                    assign = dict(zip(keep_list, palette))
                    ok = True
                    for v in keep_list:
                        for u in g.neighbors(v):
                            cu = assign.get(u, color_of.get(u))
                            if cu is not None and cu == assign[v]:
                                ok = False
                                break
                        if not ok:
                            break
                    if not ok:
                        continue
                    new_key = key | frozenset(assign.items())
                    extra = g.weight(clique - keep)
                    table.offer(new_key, cost + extra, (key, keep))

    def forget(table, node, child):
        clique = node.clique
        for key, (cost, _) in child.data.items():
            surv = frozenset(v for v, _ in key)
            leaving = surv & clique
            if _constraint_reject(g, leaving, surv - clique, surv):
                continue
            new_key = frozenset((v, c) for v, c in key if v not in clique)
            table.offer(new_key, cost, (key,))

    def join(table, node, t1, t2):
        bag = _bag_of(node.cliques)
        for key, (c1, _) in t1.data.items():
            hit = t2.data.get(key)
            if hit is None:
                continue
            surv = frozenset(v for v, _ in key)
            dup = g.weight(bag - surv)
            table.offer(key, c1 + hit[0] - dup, (key, key))

    handlers = {"leaf": leaf, "introduce": introduce, "forget": forget, "join": join}
    root_table, kept = _run(ntd, handlers, budget, cap)
    entry = root_table.data.get(frozenset())
    if entry is None:
        return None
    deleted: set[int] = set()

    def collect(node, key, back):
        if node.kind == "introduce":
            deleted.update(node.clique - back[1])

    _reconstruct(ntd, kept, frozenset(), collect)
    tables = {i: {k: v[0] for k, v in t.items()} for i, t in kept.items()} if keep_tables else None
    return DPResult(entry[0], frozenset(deleted), frozenset(), tables)
