"""Command-line interface.

Subcommands: ``solve`` (run the search and write a solution file),
``verify`` (standalone feasibility check of a solution file), ``bench``
(multi-run benchmark harness with CSV report), ``render`` (SVG layout),
and ``sweep`` (selection-count parameter study).

Exit codes: 0 success / feasible, 1 usage or parse error, 2 no feasible
solution within the deadline (or verification failure).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional

from . import __version__
from .bench import report_csv, report_table, run_instance
from .instance import Family, default_records, make_instance
from .model import energy, worst_overlap
from .search import SolverConfig, default_l0, solve
from .solution import from_pattern, read_solution, write_plaintext, write_solution
from .svg import write_svg

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NO_SOLUTION = 2


class _Parser(argparse.ArgumentParser):
    """argparse variant that exits with status 1 on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def build_parser() -> _Parser:
    parser = _Parser(prog="circlepack", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_instance_args(p):
        p.add_argument("--family", required=True, type=Family.parse,
                       help="instance family: linear (r_i = i) or sqrt (r_i = sqrt(i))")
        p.add_argument("--n", required=True, type=int, help="number of circles")

    def add_solver_args(p):
        p.add_argument("--l0", type=float, default=None,
                       help="starting container size (default: recorded best)")
        p.add_argument("--time", type=float, required=True, help="time budget in seconds")
        p.add_argument("--seed", type=int, default=0, help="master RNG seed")
        p.add_argument("--threads", type=int, default=0,
                       help="worker threads; 0 = reproducible serial (default)")
        p.add_argument("--g", type=int, default=32, help="initial random patterns")
        p.add_argument("--m", type=int, default=3, help="patterns selected per round")
        p.add_argument("--kp", type=int, default=20, help="basin-hopping iterations per loop")
        p.add_argument("--kb", type=int, default=5, help="perturbation loops per restart")
        p.add_argument("--alpha", type=float, default=0.999, help="container shrink factor")
        p.add_argument("--batch39", action="store_true",
                       help="drop random intra-group swaps (39-move batches)")
        p.add_argument("--verbose", action="store_true", help="print phase trace to stderr")

    p_solve = sub.add_parser("solve", help="search for a packing and write a solution file")
    add_instance_args(p_solve)
    add_solver_args(p_solve)
    p_solve.add_argument("-o", "--output", default=None, help="solution JSON path")
    p_solve.add_argument("--svg", default=None, help="also render the layout to this SVG path")
    p_solve.add_argument("--txt", default=None, help="also export plain-text 'i x y r' rows")

    p_verify = sub.add_parser("verify", help="check a solution file for overlaps")
    p_verify.add_argument("solution", help="solution JSON path")
    p_verify.add_argument("--tol", type=float, default=1e-9,
                          help="maximum allowed overlap depth (default 1e-9)")

    p_bench = sub.add_parser("bench", help="benchmark a range of instances against the records")
    p_bench.add_argument("--family", required=True, type=Family.parse)
    p_bench.add_argument("--n-min", required=True, type=int)
    p_bench.add_argument("--n-max", required=True, type=int)
    p_bench.add_argument("--repeats", type=int, default=10)
    p_bench.add_argument("--rel-tol", type=float, default=1e-6,
                         help="relative tolerance for counting a hit (default 1e-6)")
    add_solver_args(p_bench)
    p_bench.add_argument("-o", "--output", default=None, help="CSV report path")

    p_render = sub.add_parser("render", help="render a solution file to SVG")
    p_render.add_argument("solution", help="solution JSON path")
    p_render.add_argument("-o", "--output", required=True, help="SVG output path")

    p_sweep = sub.add_parser("sweep", help="study the selection count m on one instance")
    add_instance_args(p_sweep)
    p_sweep.add_argument("--m-values", default="1,2,3,4,5",
                         help="comma-separated m values (default 1..5)")
    p_sweep.add_argument("--repeats", type=int, default=5)
    p_sweep.add_argument("--rel-tol", type=float, default=1e-6)
    add_solver_args(p_sweep)
    p_sweep.add_argument("-o", "--output", default=None, help="CSV report path")
    return parser


def _solver_config(args, m: Optional[int] = None, seed: Optional[int] = None) -> SolverConfig:
    return SolverConfig(
        G=args.g,
        m=m if m is not None else args.m,
        k_p=args.kp,
        k_b=args.kb,
        alpha=args.alpha,
        time_limit=args.time,
        seed=seed if seed is not None else args.seed,
        threads=args.threads,
        batch39=args.batch39,
    )


def _trace_hook(args):
    if not args.verbose:
        return None

    def hook(rec):
        best = rec.get("best_ue")
        best_s = "-" if best is None else f"{best:.3e}"
        sys.stderr.write(f"[{rec['t']:9.2f}s] {rec['phase']:<14} best_ue={best_s} pool={rec['pool']}\n")

    return hook


def cmd_solve(args) -> int:
    try:
        inst = make_instance(args.family, args.n)
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    l0 = args.l0 if args.l0 is not None else default_l0(inst)
    cfg = _solver_config(args)
    res = solve(inst, L0=l0, cfg=cfg, trace_hook=_trace_hook(args))
    if not res.feasible:
        sys.stderr.write(
            f"no feasible packing for {inst.family.value}-{inst.n} at L0={l0:.11f} "
            f"within {args.time}s ({res.lbfgs_calls} minimizations, {res.restarts} restarts)\n"
        )
        return EXIT_NO_SOLUTION

    wall = None if args.threads == 0 else res.wall_seconds
    sol = from_pattern(res.pattern, solver_version=__version__, seed=args.seed, wall_time_s=wall)
    out_path = args.output or f"solution-{inst.family.value}-{inst.n}.json"
    write_solution(sol, out_path)
    if args.svg:
        write_svg(sol, args.svg)
    if args.txt:
        write_plaintext(sol, args.txt)

    print(f"instance      {inst.family.value}-{inst.n}")
    print(f"container L   {res.L:.11f}")
    for source, value in sorted(default_records().sources(inst.family, inst.n).items()):
        gap = (res.L - value) / value * 100.0
        print(f"vs {source:<12}{value:.11f}  gap {gap:+.7f}%")
    print(f"wall time     {res.wall_seconds:.1f}s  lbfgs calls {res.lbfgs_calls}")
    print(f"solution      {out_path}")
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        sol = read_solution(args.solution)
    except json.JSONDecodeError as exc:
        sys.stderr.write(
            f"parse error in {args.solution} at line {exc.lineno}, column {exc.colno}: {exc.msg}\n"
        )
        return EXIT_USAGE
    except (OSError, ValueError) as exc:
        sys.stderr.write(f"cannot read {args.solution}: {exc}\n")
        return EXIT_USAGE

    pattern = sol.to_pattern()
    depth, kind, ids = worst_overlap(pattern)
    report = energy(pattern)
    max_pain = float(report.pain.max()) if pattern.n else 0.0
    ok = depth <= args.tol
    where = {
        "pair": lambda: f"circles {ids[0]} and {ids[1]}",
        "border-v": lambda: f"circle {ids[0]} vs vertical border",
        "border-h": lambda: f"circle {ids[0]} vs horizontal border",
        "none": lambda: "none",
    }[kind]()
    print(f"worst overlap {depth:.3e} ({where})")
    print(f"energy        {report.U_e:.3e}")
    print(f"max pain      {max_pain:.3e}")
    print(f"verdict       {'FEASIBLE' if ok else 'INFEASIBLE'} at tol {args.tol:g}")
    return EXIT_OK if ok else EXIT_NO_SOLUTION


def cmd_bench(args) -> int:
    if args.n_min > args.n_max:
        sys.stderr.write("error: --n-min must not exceed --n-max\n")
        return EXIT_USAGE
    cfg = _solver_config(args)
    rows = []
    hook = None
    if args.verbose:
        def hook(n, k, res):
            status = f"L={res.L:.11f}" if res.feasible else "no solution"
            sys.stderr.write(
                f"  n={n} run {k}: {status} in {res.wall_seconds:.1f}s\n"
            )
    for n in range(args.n_min, args.n_max + 1):
        rows.append(
            run_instance(args.family, n, args.repeats, cfg,
                         rel_tol=args.rel_tol, l0=args.l0, run_hook=hook)
        )
    print(report_table(rows))
    if args.output:
        csv_text = report_csv(rows, deterministic=args.threads == 0)
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(csv_text)
        print(f"report        {args.output}")
    return EXIT_OK


def cmd_render(args) -> int:
    try:
        sol = read_solution(args.solution)
    except json.JSONDecodeError as exc:
        sys.stderr.write(
            f"parse error in {args.solution} at line {exc.lineno}, column {exc.colno}: {exc.msg}\n"
        )
        return EXIT_USAGE
    except (OSError, ValueError) as exc:
        sys.stderr.write(f"cannot read {args.solution}: {exc}\n")
        return EXIT_USAGE
    write_svg(sol, args.output)
    print(f"svg           {args.output}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    try:
        m_values = [int(v) for v in args.m_values.split(",") if v.strip()]
    except ValueError:
        sys.stderr.write(f"error: bad --m-values {args.m_values!r}\n")
        return EXIT_USAGE
    try:
        inst = make_instance(args.family, args.n)
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    record = default_records().get(inst.family, inst.n, "PAS-PCI")

    lines = ["m,hits,repeats,avg_time_s,best_L,worst_L,avg_L"]
    header = f"{'m':>3} {'hits':>7} {'avg t':>9} {'best L':>16} {'worst L':>16} {'avg L':>16}"
    print(header)
    print("-" * len(header))
    for m in m_values:
        found: list[float] = []
        times: list[float] = []
        hits = 0
        for k in range(args.repeats):
            cfg = _solver_config(args, m=m, seed=args.seed + k)
            res = solve(inst, L0=args.l0, cfg=cfg)
            if res.feasible:
                found.append(res.L)
                if record is None or res.L <= record * (1.0 + args.rel_tol):
                    hits += 1
                    times.append(res.wall_seconds)
        avg_t = sum(times) / len(times) if times else math.nan
        best = min(found) if found else math.nan
        worst = max(found) if found else math.nan
        avg = sum(found) / len(found) if found else math.nan
        print(f"{m:>3} {hits:>4}/{args.repeats:<2} {avg_t:>9.1f} {best:>16.11f} {worst:>16.11f} {avg:>16.11f}")
        t_field = "" if args.threads == 0 else (f"{avg_t:.1f}" if times else "")
        lines.append(
            f"{m},{hits},{args.repeats},{t_field},"
            f"{_csv_num(best)},{_csv_num(worst)},{_csv_num(avg)}"
        )
    if args.output:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write("\n".join(lines) + "\n")
        print(f"report        {args.output}")
    return EXIT_OK


def _csv_num(v: float) -> str:
    return "" if math.isnan(v) else f"{v:.11f}"


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    handlers = {
        "solve": cmd_solve,
        "verify": cmd_verify,
        "bench": cmd_bench,
        "render": cmd_render,
        "sweep": cmd_sweep,
    }
    try:
        return handlers[args.command](args)
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
