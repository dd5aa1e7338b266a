"""Command-line interface.

    diskhitter gen    --n 30 --ply 3 --seed 7 --out inst.json
    diskhitter solve  --problem fvs --k 4 --input inst.json [--robust] [--report r.json]
    diskhitter verify --problem fvs --input inst.json --solution sol.json --k 4
    diskhitter oracle --problem oct --input inst.json --kmax 6
    diskhitter stats  --input inst.json [more.json ...] [--k 3] [--td out.td]
                      [--csv out.csv] [--plot prefix]

Exit codes: 0 solved / verified, 1 certified NO (or failed verification),
2 bad input or generation failure, 3 width overflow after the robust
fallback.  Instance files are JSON with either a "disks" list or a "graph"
object, plus optional "must_hit" edges and "multiplicities".
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import dp, pipeline
from .branching import GEOMETRIC, ROBUST, make_instance
from .decomposition import (SEPARATOR_WEIGHT_CONSTANT, build_td, robust_td,
                            weighted_width, write_pace_td)
from .geometry import Disk, intersection_edges, ply
from .graph import HittingGraph
from .kernel import kernelize_ths
from .oracle import (MAX_ORACLE_VERTICES, GenerationStalled, TooLarge, brute_force,
                     random_instance)
from .pipeline import SolveConfig, certify_solution, select_p


class InputError(ValueError):
    pass


def parse_instance(path):
    """Returns (disks or None, HittingGraph)."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read instance: {exc}")
    if not isinstance(raw, dict):
        raise InputError("instance must be a JSON object")
    disks = None
    try:
        if "disks" in raw:
            disks = tuple(Disk(int(d["id"]), float(d["x"]), float(d["y"]), float(d["r"]))
                          for d in raw["disks"])
            ids = sorted(d.id for d in disks)
            if ids != list(range(len(ids))):
                raise InputError("disk ids must be 0..n-1")
            n = len(disks)
            edges = intersection_edges(disks)
        elif "graph" in raw:
            n = int(raw["graph"]["n"])
            edges = [(int(u), int(v)) for u, v in raw["graph"]["edges"]]
            if any(not 0 <= u < n or not 0 <= v < n for u, v in edges):
                raise InputError("edge endpoint out of range")
        else:
            raise InputError("instance needs a 'disks' or 'graph' field")
        mult = None
        if "multiplicities" in raw:
            mult = [1] * n
            for key, m in raw["multiplicities"].items():
                mult[int(key)] = int(m)
        must_hit = [(int(u), int(v)) for u, v in raw.get("must_hit", [])]
        graph = HittingGraph.from_edges(n, edges, multiplicity=mult, must_hit=must_hit)
    except InputError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed instance: {exc}")
    return disks, graph


def write_instance(path, disks):
    payload = {"disks": [{"id": d.id, "x": d.cx, "y": d.cy, "r": d.r} for d in disks]}
    with open(path, "w") as fh:
        json.dump(payload, fh, sort_keys=True, indent=1)
        fh.write("\n")


def cmd_gen(args) -> int:
    if args.n < 1 or args.ply < 1:
        print("gen: --n and --ply must be positive", file=sys.stderr)
        return 2
    try:
        disks = random_instance(args.n, args.ply, args.seed)
    except GenerationStalled as exc:
        print(f"gen: {exc}", file=sys.stderr)
        return 2
    write_instance(args.out, disks)
    print(f"wrote {args.n} disks to {args.out}")
    return 0


def cmd_solve(args) -> int:
    try:
        disks, graph = parse_instance(args.input)
    except InputError as exc:
        print(f"solve: {exc}", file=sys.stderr)
        return 2
    mode = ROBUST if (args.robust or disks is None) else GEOMETRIC
    config = SolveConfig(problem=args.problem, mode=mode, p=args.p, seed=args.seed,
                         parallelism=args.jobs, state_cap=args.state_cap)
    source = disks if (disks is not None and mode == GEOMETRIC) else graph
    try:
        report = pipeline.solve(source, args.k, config)
    except dp.WidthOverflow as exc:
        print(f"solve: {exc}", file=sys.stderr)
        return 3
    if args.report:
        with open(args.report, "w") as fh:
            json.dump(report.to_dict(), fh, sort_keys=True, indent=1)
            fh.write("\n")
    if report.answer == "YES":
        print("YES " + " ".join(map(str, report.solution)))
        return 0
    print("NO")
    return 1


def cmd_verify(args) -> int:
    try:
        _, graph = parse_instance(args.input)
        with open(args.solution) as fh:
            raw = json.load(fh)
        solution = raw["solution"] if isinstance(raw, dict) else raw
        solution = frozenset(int(v) for v in solution)
    except (InputError, OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        print(f"verify: {exc}", file=sys.stderr)
        return 2
    ok = certify_solution(args.problem, graph, solution, args.k)
    print("VALID" if ok else "INVALID")
    return 0 if ok else 1


def cmd_oracle(args) -> int:
    try:
        _, graph = parse_instance(args.input)
    except InputError as exc:
        print(f"oracle: {exc}", file=sys.stderr)
        return 2
    kmax = args.kmax if args.kmax is not None else len(graph.alive)
    try:
        got = brute_force(args.problem, graph, kmax)
    except TooLarge as exc:
        print(f"oracle: {exc}", file=sys.stderr)
        return 2
    payload = {
        "optimum": None if math.isinf(got.optimum) else int(got.optimum),
        "witness": sorted(got.witness) if got.witness is not None else None,
        "enumerated": got.enumerated,
    }
    print(json.dumps(payload, sort_keys=True))
    return 0


STATS_COLUMNS = ("file", "n", "m", "ply", "weighted_width", "kernel_n", "k", "p", "sep_constant")


def _stats_row(path, k):
    disks, graph = parse_instance(path)
    the_ply = ply(disks) if disks else ""
    td = build_td(graph, disks) if disks else robust_td(graph)
    width = weighted_width(td)
    mode = GEOMETRIC if disks else ROBUST
    p = select_p("ths", k, mode)
    inst = make_instance(k, graph=graph, disks=disks, robust=disks is None)
    reduced = kernelize_ths(inst)
    kernel_n = len(reduced.graph.alive) if reduced is not None else 0
    return {
        "file": str(path),
        "n": len(graph.alive),
        "m": graph.edge_count(),
        "ply": the_ply,
        "weighted_width": round(width, 6),
        "kernel_n": kernel_n,
        "k": k,
        "p": p,
        "sep_constant": SEPARATOR_WEIGHT_CONSTANT,
    }, td, graph


def _render_plots(rows, prefix):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    geo = [r for r in rows if r["ply"] != ""]
    fig, ax = plt.subplots(figsize=(5, 4))
    ns = [r["n"] for r in rows]
    ws = [r["weighted_width"] for r in rows]
    ax.scatter(ns, ws, label="weighted width", s=18)
    if ns:
        grid = sorted(set(ns))
        ax.plot(grid, [SEPARATOR_WEIGHT_CONSTANT * math.sqrt(x) for x in grid],
                "k--", label=f"{SEPARATOR_WEIGHT_CONSTANT}*sqrt(n)")
    ax.set_xlabel("n")
    ax.set_ylabel("weighted width")
    ax.legend()
    fig.tight_layout()
    width_png = f"{prefix}_width.png"
    fig.savefig(width_png)
    plt.close(fig)

    kernel_png = None
    with_kernel = [r for r in rows if r["kernel_n"]]
    if with_kernel:
        fig, ax = plt.subplots(figsize=(5, 4))
        ax.scatter([r["p"] * r["k"] for r in with_kernel],
                   [r["kernel_n"] for r in with_kernel], s=18)
        ax.set_xlabel("p*k")
        ax.set_ylabel("kernel size")
        ax.set_xscale("log")
        ax.set_yscale("log")
        fig.tight_layout()
        kernel_png = f"{prefix}_kernel.png"
        fig.savefig(kernel_png)
        plt.close(fig)
    return [p for p in (width_png, kernel_png) if p]


def cmd_stats(args) -> int:
    rows = []
    last_td = None
    last_graph = None
    try:
        for path in args.input:
            row, td, graph = _stats_row(path, args.k)
            rows.append(row)
            last_td, last_graph = td, graph
    except (InputError, TooLarge) as exc:
        print(f"stats: {exc}", file=sys.stderr)
        return 2
    lines = [",".join(STATS_COLUMNS)]
    lines += [",".join(str(r[c]) for c in STATS_COLUMNS) for r in rows]
    text = "\n".join(lines)
    print(text)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(text + "\n")
    if args.td and last_td is not None:
        write_pace_td(last_td, last_graph, args.td)
    if args.plot:
        for png in _render_plots(rows, args.plot):
            print(f"figure: {png}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="diskhitter", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a random disk instance")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--ply", type=int, default=3)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=cmd_gen)

    solve = sub.add_parser("solve", help="solve a hitting problem")
    solve.add_argument("--problem", choices=pipeline.PROBLEMS, required=True)
    solve.add_argument("--k", type=int, required=True)
    solve.add_argument("--input", required=True)
    solve.add_argument("--robust", action="store_true",
                       help="ignore the geometric representation")
    solve.add_argument("--p", type=int, default=None)
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--jobs", type=int, default=1)
    solve.add_argument("--state-cap", type=int, default=None)
    solve.add_argument("--report", default=None)
    solve.set_defaults(func=cmd_solve)

    verify = sub.add_parser("verify", help="check a solution file")
    verify.add_argument("--problem", choices=pipeline.PROBLEMS, required=True)
    verify.add_argument("--input", required=True)
    verify.add_argument("--solution", required=True)
    verify.add_argument("--k", type=int, required=True)
    verify.set_defaults(func=cmd_verify)

    oracle = sub.add_parser("oracle", help="brute-force optimum (small instances)")
    oracle.add_argument("--problem", choices=pipeline.PROBLEMS, required=True)
    oracle.add_argument("--input", required=True)
    oracle.add_argument("--kmax", type=int, default=None)
    oracle.set_defaults(func=cmd_oracle)

    stats = sub.add_parser("stats", help="instance metrics as CSV, with figures")
    stats.add_argument("--input", nargs="+", required=True)
    stats.add_argument("--k", type=int, default=3, help="budget for the kernel-size metric")
    stats.add_argument("--td", default=None, help="export the decomposition in PACE format")
    stats.add_argument("--csv", default=None)
    stats.add_argument("--plot", default=None, help="prefix for rendered PNG figures")
    stats.set_defaults(func=cmd_stats)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
