"""Exact solvers for triangle hitting set, feedback vertex set, and odd
cycle transversal on disk intersection graphs."""

from .branching import HittingInstance, make_instance, run_two_step
from .geometry import CliquePartition, Disk, clique_partition, disks_intersect, ply
from .graph import HittingGraph
from .oracle import OracleResult, brute_force, random_instance
from .pipeline import SolveConfig, SolveReport, certify_solution, select_p, solve

__all__ = [
    "CliquePartition", "Disk", "HittingGraph", "HittingInstance", "OracleResult",
    "SolveConfig", "SolveReport", "brute_force", "certify_solution",
    "clique_partition", "disks_intersect", "make_instance", "ply",
    "random_instance", "run_two_step", "select_p", "solve",
]
