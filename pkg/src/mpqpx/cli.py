"""Command-line surface: solve, eval, check, gen, plot2d.

Exit codes: 0 success, 1 invalid input, 2 numerical failure or failed
self-check, 3 infeasible problem / query outside the solved partition.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time

import numpy as np

from . import errors
from .checker import run_check
from .generators import KINDS, generate
from .plotting import plot_partition
from .problem_io import canonical_dumps, load_problem, save_problem
from .solution import (SolveOptions, compute_explicit_solution, evaluate,
                       load_solution, save_solution)

_EXIT_CODES = [
    ((errors.ParseError, errors.ValidationError, errors.WrongDimension,
      errors.Unbounded, errors.TooLarge), 1),
    ((errors.CholeskyFailure, errors.GramSingular, errors.IterationLimit,
      errors.NoStartFound, errors.BadSeed, errors.SequenceFailure), 2),
    ((errors.InfeasibleProblem, errors.OutsideSolution), 3),
]


def _exit_code(exc: errors.MpqpError) -> int:
    for classes, code in _EXIT_CODES:
        if isinstance(exc, classes):
            return code
    return 2


def solve_cmd(problem_path, out_path, eps_feas: float = 1e-8,
              rank_tol: float = 1e-10):
    qp = load_problem(problem_path)
    t0 = time.perf_counter()
    sol, _ = compute_explicit_solution(
        qp, SolveOptions(eps_feas=eps_feas, rank_tol=rank_tol))
    elapsed = time.perf_counter() - t0
    save_solution(sol, out_path)
    stats = sol.stats
    print(f"|A*| = {len(sol.records)}")
    print("counters: " + " ".join(f"{k}={v}" for k, v in stats.items()))
    print(f"wall time: {elapsed:.3f}s")
    print(f"solution written to {out_path}")
    return sol


def eval_cmd(solution_path, theta):
    sol = load_solution(solution_path)
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (sol.p,):
        raise errors.ValidationError(
            f"theta has {theta.size} entries, solution expects p={sol.p}"
        )
    x, active = evaluate(sol, theta)
    print(json.dumps({"x_star": [float(v) for v in x],
                      "active_set": list(active.one_based())}))
    return x, active


def check_cmd(problem_path, eps_feas: float = 1e-8,
              rank_tol: float = 1e-10, samples: int = 1000,
              seed: int = 20240) -> int:
    qp = load_problem(problem_path)
    report = run_check(
        qp, options=SolveOptions(eps_feas=eps_feas, rank_tol=rank_tol),
        samples=samples, seed=seed)
    print(report.text())
    return 0 if report.passed else 2


def gen_cmd(kind: str, horizon: int, seed: int, out_path):
    doc = generate(kind, horizon, seed)
    save_problem(doc, out_path)
    # round-trip through the validating loader so broken generator output
    # can never be written silently
    qp = load_problem(out_path)
    print(f"wrote {out_path}: n={qp.n} m={qp.m} p={qp.p}")
    return doc


def plot2d_cmd(solution_path, out_path, grid: int = 200):
    sol = load_solution(solution_path)
    info = plot_partition(sol, out_path, grid=grid)
    print(f"wrote {info['image']} ({info['legend_rows']} regions, "
          f"{info['cells_colored']} grid cells colored)")
    print(f"legend: {info['legend']}")
    return info


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mpqpx",
        description="explicit solutions of multi-parametric QPs")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="compute an explicit solution")
    p_solve.add_argument("problem")
    p_solve.add_argument("-o", "--output", required=True)
    p_solve.add_argument("--eps-feas", type=float, default=1e-8)
    p_solve.add_argument("--rank-tol", type=float, default=1e-10)
    p_solve.add_argument("--log", action="store_true",
                         help="emit one log line per explored active set")

    p_eval = sub.add_parser("eval", help="evaluate a solution at one theta")
    p_eval.add_argument("solution")
    p_eval.add_argument("--theta", required=True,
                        help="comma-separated parameter values")

    p_check = sub.add_parser(
        "check", help="compare exploration against brute-force enumeration")
    p_check.add_argument("problem")
    p_check.add_argument("--eps-feas", type=float, default=1e-8)
    p_check.add_argument("--rank-tol", type=float, default=1e-10)
    p_check.add_argument("--samples", type=int, default=1000)
    p_check.add_argument("--seed", type=int, default=20240)
    p_check.add_argument("--log", action="store_true")

    p_gen = sub.add_parser("gen", help="generate a benchmark problem file")
    p_gen.add_argument("--kind", required=True, choices=KINDS)
    p_gen.add_argument("--horizon", type=int, required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("-o", "--output", required=True)

    p_plot = sub.add_parser("plot2d", help="raster plot of a 2-d partition")
    p_plot.add_argument("solution")
    p_plot.add_argument("-o", "--output", required=True)
    p_plot.add_argument("--grid", type=int, default=200)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if getattr(args, "log", False):
        logging.basicConfig(stream=sys.stderr, level=logging.DEBUG,
                            format="%(name)s: %(message)s")
        logging.getLogger("mpqpx").setLevel(logging.DEBUG)
    try:
        if args.command == "solve":
            solve_cmd(args.problem, args.output,
                      eps_feas=args.eps_feas, rank_tol=args.rank_tol)
            return 0
        if args.command == "eval":
            try:
                theta = [float(v) for v in args.theta.split(",") if v != ""]
            except ValueError:
                raise errors.ValidationError(
                    f"--theta {args.theta!r} is not a comma-separated "
                    f"number list") from None
            eval_cmd(args.solution, theta)
            return 0
        if args.command == "check":
            return check_cmd(args.problem, eps_feas=args.eps_feas,
                             rank_tol=args.rank_tol, samples=args.samples,
                             seed=args.seed)
        if args.command == "gen":
            gen_cmd(args.kind, args.horizon, args.seed, args.output)
            return 0
        if args.command == "plot2d":
            plot2d_cmd(args.solution, args.output, grid=args.grid)
            return 0
        raise AssertionError(f"unhandled command {args.command}")
    except errors.MpqpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
