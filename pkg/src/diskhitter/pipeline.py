"""Problem-level orchestration: parameter selection, branching, cleaning,
kernelization, decomposition, DP, and certification."""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field

from . import dp
from .branching import GEOMETRIC, ROBUST, HittingInstance, make_instance, run_two_step
from .decomposition import build_td, make_nice, robust_td, weighted_width
from .graph import (HittingGraph, clean_for_fvs_oct, clean_for_ths, fvs_2approx,
                    greedy_ths_3approx, is_bipartite, is_forest, triangle_free)
from .kernel import kernelize_ths

log = logging.getLogger(__name__)

PROBLEMS = ("ths", "fvs", "oct")

_P_EXPONENT = {
    ("ths", GEOMETRIC): 1 / 3, ("ths", ROBUST): 1 / 5,
    ("fvs", GEOMETRIC): 1 / 8, ("fvs", ROBUST): 1 / 10,
    ("oct", GEOMETRIC): 1 / 16, ("oct", ROBUST): 1 / 20,
}


@dataclass
class SolveConfig:
    problem: str
    mode: str = GEOMETRIC
    p: int | None = None
    seed: int = 0
    parallelism: int = 1
    state_cap: int | None = None
    use_rank_reduce: bool = False
    clean: bool = True

    def __post_init__(self):
        if self.problem not in PROBLEMS:
            raise ValueError(self.problem)
        if self.p is not None and self.p < 3:
            raise ValueError("explicit p must be at least 3")


@dataclass
class SolveReport:
    answer: str  # "YES" | "NO"
    solution: tuple[int, ...] | None
    instances_explored: int
    kernel_sizes: list[int] = field(default_factory=list)
    widths: list[float] = field(default_factory=list)
    wall_time: float = 0.0
    certified: bool = False
    p: int = 3

    def to_dict(self):
        return {
            "answer": self.answer,
            "solution": list(self.solution) if self.solution is not None else None,
            "instances_explored": self.instances_explored,
            "kernel_sizes": self.kernel_sizes,
            "widths": self.widths,
            "wall_time": self.wall_time,
            "certified": self.certified,
            "p": self.p,
        }


def select_p(problem: str, k: int, mode: str) -> int:
    """Branching threshold with the per-problem exponent, floored at 3."""
    if k < 1:
        return 3
    return max(3, round(k ** _P_EXPONENT[(problem, mode)]))


def deep_vertices(g: HittingGraph, hold: frozenset[int]) -> frozenset[int]:
    """Vertices outside the set whose whole neighborhood lies inside it."""
    return frozenset(v for v in g.alive if v not in hold and g.neighbors(v) <= hold)


def certify_solution(problem: str, g: HittingGraph, solution, k: int) -> bool:
    solution = frozenset(solution)
    if not solution <= g.alive:
        return False
    if g.weight(solution) > k:
        return False
    for u, v in g.constraint_edges():
        if u not in solution and v not in solution:
            return False
    if problem == "ths":
        return triangle_free(g, solution)
    if problem == "fvs":
        return is_forest(g, solution)
    if problem == "oct":
        return is_bipartite(g, solution)
    raise ValueError(problem)


@dataclass
class _InstanceOutcome:
    solution: frozenset[int] | None
    kernel_size: int | None
    width: float | None
    overflowed: bool


def _solve_emitted(inst: HittingInstance, problem: str, config: SolveConfig) -> _InstanceOutcome:
    """Clean, kernelize (ths), decompose, and run the DP on one emitted instance."""
    g = inst.graph
    if config.clean:
        g = clean_for_ths(g) if problem == "ths" else clean_for_fvs_oct(g, problem)
    inst = HittingInstance(g, inst.k, inst.forced, inst.mode,
                           None if inst.disks is None else
                           tuple(d for d in inst.disks if d.id in g.alive))
    kernel_size = None
    if problem == "ths":
        reduced = kernelize_ths(inst)
        if reduced is None:
            return _InstanceOutcome(None, None, None, False)
        inst = reduced
        kernel_size = len(inst.graph.alive)
    elif problem == "fvs":
        approx = fvs_2approx(inst.graph)
        if inst.graph.weight(approx) > 2 * inst.k:
            return _InstanceOutcome(None, kernel_size, None, False)
        if log.isEnabledFor(logging.INFO):
            hold = frozenset(approx) | frozenset(
                v for t in _core_triangles(inst) for v in t)
            deep = deep_vertices(inst.graph, hold)
            log.info("fvs diagnostics: |hold|=%d deep=%d", len(hold), len(deep))

    g = inst.graph
    if not g.alive:
        return _InstanceOutcome(frozenset(inst.forced), kernel_size, 0.0, False)

    solvers = {"ths": dp.solve_ths_td, "fvs": dp.solve_fvs_td, "oct": dp.solve_oct_td}
    solver = solvers[problem]
    attempts = [inst.disks] if inst.disks is not None else [None]
    if inst.disks is not None:
        attempts.append(None)  # robust retry after a width overflow
    overflowed = False
    for disks in attempts:
        td = build_td(g, disks) if disks is not None else robust_td(g)
        ntd = make_nice(td)
        width = weighted_width(td)
        kwargs = {"cap": config.state_cap}
        if problem == "fvs":
            kwargs["use_rank_reduce"] = config.use_rank_reduce
        try:
            got = solver(ntd, g, inst.k, **kwargs)
        except dp.WidthOverflow:
            overflowed = True
            continue
        if got is None:
            return _InstanceOutcome(None, kernel_size, width, False)
        solution = frozenset(inst.forced) | got.solution_on(g)
        return _InstanceOutcome(solution, kernel_size, width, False)
    return _InstanceOutcome(None, kernel_size, None, overflowed)


def _core_triangles(inst: HittingInstance):
    from .kernel import compute_core

    core = compute_core(inst)
    return core.triangles if core is not None else ()


def solve(source, k: int, config: SolveConfig) -> SolveReport:
    """End-to-end solve; source is a disk sequence or a HittingGraph.

    The first certified solution wins.  A width overflow that survives the
    robust retry is re-raised once no other instance certifies an answer.
    """
    start = time.perf_counter()
    if k < 0:
        raise ValueError("k must be nonnegative")
    if isinstance(source, HittingGraph):
        root = make_instance(k, graph=source, robust=True)
    else:
        root = make_instance(k, disks=source, robust=(config.mode == ROBUST))
    original = root.graph
    p = config.p if config.p is not None else select_p(config.problem, k, config.mode)

    report = SolveReport(answer="NO", solution=None, instances_explored=0, p=p)
    overflow = False
    for outcome in _outcome_stream(run_two_step(root, p), config):
        report.instances_explored += 1
        if outcome.kernel_size is not None:
            report.kernel_sizes.append(outcome.kernel_size)
        if outcome.width is not None:
            report.widths.append(outcome.width)
        overflow = overflow or outcome.overflowed
        if outcome.solution is not None:
            if not certify_solution(config.problem, original, outcome.solution, k):
                raise AssertionError(
                    f"uncertified solution {sorted(outcome.solution)} for {config.problem}")
            report.answer = "YES"
            report.solution = tuple(sorted(outcome.solution))
            report.certified = True
            break
    report.wall_time = time.perf_counter() - start
    if report.answer == "NO" and overflow:
        raise dp.WidthOverflow("an instance overflowed even after the robust fallback")
    return report


def _outcome_stream(instances, config: SolveConfig):
    """Outcomes in stream order; with workers, a sliding window of futures.

    Ordered consumption keeps reports deterministic regardless of the worker
    count, and the window keeps lazily generated branches lazy.
    """
    if config.parallelism <= 1:
        for inst in instances:
            yield _solve_emitted(inst, config.problem, config)
        return
    from concurrent.futures import ProcessPoolExecutor

    window = 4 * config.parallelism
    with ProcessPoolExecutor(max_workers=config.parallelism) as pool:
        pending = []
        it = iter(instances)
        try:
            for inst in it:
                pending.append(pool.submit(_solve_emitted, inst, config.problem, config))
                if len(pending) >= window:
                    yield pending.pop(0).result()
            while pending:
                yield pending.pop(0).result()
        finally:
            for f in pending:
                f.cancel()
