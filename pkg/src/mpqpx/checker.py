"""Self-check: exploration vs. exhaustive enumeration plus pointwise audit.

Runs the full pipeline and the brute-force oracle on the same problem,
compares the resulting active-set collections exactly, and then samples
the parameter box: wherever the fixed-theta solve is optimal the explicit
solution must reproduce its optimizer, and wherever it is infeasible the
point location must report the query as uncovered.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import IterationLimit, OutsideSolution, TooLarge
from .model import MpQP, contains
from .oracle import MAX_BRUTE_ROWS, brute_force, pointwise_solve
from .plotting import bounding_box
from .solution import SolveOptions, compute_explicit_solution, evaluate
from .transform import recover_point, to_ldp

POINTWISE_TOL = 1e-6


@dataclass
class CheckReport:
    passed: bool
    lines: list[str] = field(default_factory=list)
    sets_equal: bool = False
    extra_sets: list[tuple[int, ...]] = field(default_factory=list)
    missing_sets: list[tuple[int, ...]] = field(default_factory=list)
    samples_used: int = 0
    optimal_samples: int = 0
    infeasible_samples: int = 0
    max_deviation: float = 0.0
    violations: int = 0
    stats: dict = field(default_factory=dict)

    def text(self) -> str:
        return "\n".join(self.lines)


def run_check(qp: MpQP, *, options: SolveOptions | None = None,
              samples: int = 1000, seed: int = 20240,
              oracle_eps: float | None = None,
              tol: float = POINTWISE_TOL) -> CheckReport:
    """Compare exploration against the oracle; see module docstring.

    ``oracle_eps`` overrides the feasibility tolerance handed to the
    brute-force side only; the default (None) uses the same tolerance for
    both, which is what the CLI does.
    """
    opts = options or SolveOptions()
    if qp.m > MAX_BRUTE_ROWS:
        raise TooLarge(
            f"check needs exhaustive enumeration; m={qp.m} exceeds "
            f"{MAX_BRUTE_ROWS}"
        )
    report = CheckReport(passed=False)
    out = report.lines
    t0 = time.perf_counter()
    sol, state = compute_explicit_solution(qp, opts)
    t_explore = time.perf_counter() - t0
    ldp_problem, recovery = to_ldp(qp)
    t0 = time.perf_counter()
    oracle_sets = brute_force(ldp_problem,
                              opts.eps_feas if oracle_eps is None
                              else oracle_eps,
                              opts.rank_tol)
    t_oracle = time.perf_counter() - t0

    explore_sets = sol.active_sets()
    report.sets_equal = explore_sets == oracle_sets
    report.extra_sets = sorted(a.one_based()
                               for a in explore_sets - oracle_sets)
    report.missing_sets = sorted(a.one_based()
                                 for a in oracle_sets - explore_sets)
    report.stats = dict(sol.stats)

    out.append(f"problem: n={qp.n} m={qp.m} p={qp.p}")
    out.append(
        f"explore: |A*|={len(explore_sets)} |E|={sol.stats['explored']} "
        f"feas_calls={sol.stats['feas_calls']} "
        f"licq_fail={sol.stats['licq_fail']} "
        f"popped={sol.stats['popped']} ({t_explore:.3f}s)")
    out.append(f"oracle: |A*|={len(oracle_sets)} ({t_oracle:.3f}s)")
    if report.sets_equal:
        out.append("active-set equality: PASS")
    else:
        out.append("active-set equality: FAIL")
        if report.extra_sets:
            out.append(f"  only in explore: {report.extra_sets}")
        if report.missing_sets:
            out.append(f"  only in oracle:  {report.missing_sets}")

    lo, hi = bounding_box(qp.theta0, rtol=0.05)
    rng = np.random.default_rng(seed)
    thetas = rng.uniform(lo, hi, size=(samples, qp.p))
    worst = 0.0
    used = n_opt = n_infeas = violations = skipped = 0
    for theta in thetas:
        if not contains(qp.theta0, theta, 0.0):
            continue
        used += 1
        try:
            pw = pointwise_solve(ldp_problem, theta)
        except IterationLimit:
            skipped += 1
            continue
        if pw.is_optimal:
            n_opt += 1
            x_direct = recover_point(recovery, pw.u_star, theta)
            try:
                x_eval, _ = evaluate(sol, theta)
            except OutsideSolution:
                violations += 1
                continue
            dev = float(np.abs(x_eval - x_direct).max())
            worst = max(worst, dev)
            if dev > tol:
                violations += 1
        else:
            n_infeas += 1
            try:
                evaluate(sol, theta)
                violations += 1
            except OutsideSolution:
                pass
    report.samples_used = used
    report.optimal_samples = n_opt
    report.infeasible_samples = n_infeas
    report.max_deviation = worst
    report.violations = violations
    out.append(
        f"pointwise audit: {used} samples in the parameter set "
        f"({n_opt} optimal, {n_infeas} infeasible, {skipped} skipped), "
        f"max |x_explicit - x_direct| = {worst:.3e}, "
        f"violations = {violations}")
    out.append("pointwise agreement: " + ("PASS" if violations == 0
                                          else "FAIL"))
    report.passed = report.sets_equal and violations == 0
    out.append("RESULT: " + ("PASS" if report.passed else "FAIL"))
    return report
