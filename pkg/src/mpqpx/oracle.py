"""Ground-truth machinery: exhaustive enumeration and fixed-theta solves.

These routines are deliberately simple and independent of the exploration
logic; they back the test suite, the acceptance checks, and the choice of
a starting active set.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

import numpy as np

from . import ldp
from .errors import IterationLimit, TooLarge
from .feasibility import check_nonempty
from .model import ActiveSet, MpLDP, Polyhedron, eval_affine
from .regions import build_region, licq

ACTIVE_TOL = 1e-8
MAX_BRUTE_ROWS = 24


class PointwiseStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class PointwiseSolution:
    """Solution of the least-distance problem at one fixed parameter.

    ``lam`` has one entry per constraint (zero on inactive rows) and
    ``active_set`` collects the rows whose normalized slack is within
    tolerance of zero.  Rows with zero normal are vacuous and never
    reported active.
    """

    status: PointwiseStatus
    u_star: np.ndarray | None = None
    lam: np.ndarray | None = None
    active_set: ActiveSet | None = None

    @property
    def is_optimal(self) -> bool:
        return self.status is PointwiseStatus.OPTIMAL


def pointwise_solve(ldp_problem: MpLDP, theta: np.ndarray,
                    active_tol: float = ACTIVE_TOL,
                    max_iter: int | None = None) -> PointwiseSolution:
    """Solve ``min 0.5||u||^2 s.t. M u <= d(theta)`` at a fixed theta."""
    theta = np.asarray(theta, dtype=float)
    if not np.isfinite(theta).all():
        raise ValueError("theta must be finite")
    d_val = eval_affine(ldp_problem.d, theta)
    M = ldp_problem.M
    norms = np.linalg.norm(M, axis=1)
    zero = norms <= 1e-14 * (1.0 + np.abs(d_val))
    if (d_val[zero] < -active_tol).any():
        return PointwiseSolution(PointwiseStatus.INFEASIBLE)
    keep = np.flatnonzero(~zero)
    Mn = M[keep] / norms[keep, None]
    dn = d_val[keep] / norms[keep]
    res = ldp.min_norm_point(Mn, dn, max_iter)
    if res.status == ldp.STALLED:
        raise IterationLimit(
            f"fixed-theta solve stalled after {res.iterations} iterations"
        )
    if res.status == ldp.INFEASIBLE:
        return PointwiseSolution(PointwiseStatus.INFEASIBLE)
    u = res.point
    lam = np.zeros(ldp_problem.m)
    lam[keep] = res.multipliers / norms[keep]
    slack = dn - Mn @ u
    active = ActiveSet(keep[np.abs(slack) <= active_tol])
    return PointwiseSolution(PointwiseStatus.OPTIMAL, u_star=u, lam=lam,
                             active_set=active)


def brute_force(ldp_problem: MpLDP, eps_feas: float = 1e-8,
                rank_tol: float = 1e-10,
                max_rows: int = MAX_BRUTE_ROWS) -> set[ActiveSet]:
    """Enumerate every optimal active set satisfying the rank condition.

    Tries all index subsets of size at most n (larger ones cannot have
    independent rows), keeping those whose critical region is nonempty.
    A stalled feasibility solve keeps the candidate, mirroring the
    explorer's conservative policy.
    """
    m, n = ldp_problem.m, ldp_problem.n
    if m > max_rows:
        raise TooLarge(
            f"refusing exhaustive enumeration with m={m} > {max_rows}"
        )
    found: set[ActiveSet] = set()
    for k in range(0, min(n, m) + 1):
        for combo in itertools.combinations(range(m), k):
            a = ActiveSet(combo)
            if not licq(ldp_problem, a, rank_tol):
                continue
            record = build_region(ldp_problem, a)
            try:
                res = check_nonempty(record.region, eps_feas)
                nonempty = res.is_nonempty
            except IterationLimit:
                nonempty = True
            if nonempty:
                found.add(a)
    return found


def kkt_region_nonempty(ldp_problem: MpLDP, a: ActiveSet,
                        eps_feas: float = 1e-8) -> bool:
    """Decide whether the critical region of ``a`` is nonempty without
    assuming independent rows.

    Builds the KKT system of the active set as a polyhedron in
    (theta, u, lambda_A) with equalities encoded as paired inequalities,
    and checks its feasibility.  This is the membership test used when
    walking combinatorial sequences through rank-deficient sets.
    """
    m, n, p = ldp_problem.m, ldp_problem.n, ldp_problem.p
    idx = a.array()
    comp = np.array(a.complement(m), dtype=np.intp)
    k = len(a)
    Ma = ldp_problem.M[idx]
    dac = ldp_problem.d.coeff[idx]
    dao = ldp_problem.d.offset[idx]
    blocks = []
    rhs = []

    def add_rows(B, r):
        blocks.append(B)
        rhs.append(np.asarray(r, dtype=float))

    # stationarity u + M_A' lambda = 0 (paired inequalities)
    stat = np.hstack([np.zeros((n, p)), np.eye(n), Ma.T])
    add_rows(stat, np.zeros(n))
    add_rows(-stat, np.zeros(n))
    # active rows hold with equality: M_A u - d_A.coeff theta = d_A.offset
    if k:
        act = np.hstack([-dac, Ma, np.zeros((k, k))])
        add_rows(act, dao)
        add_rows(-act, -dao)
        # multipliers nonnegative
        add_rows(np.hstack([np.zeros((k, p + n)), -np.eye(k)]), np.zeros(k))
    # inactive rows feasible
    if comp.size:
        add_rows(np.hstack([-ldp_problem.d.coeff[comp],
                            ldp_problem.M[comp],
                            np.zeros((comp.size, k))]),
                 ldp_problem.d.offset[comp])
    # theta in the parameter set
    t0 = ldp_problem.theta0
    if t0.rows:
        add_rows(np.hstack([t0.G, np.zeros((t0.rows, n + k))]), t0.g)
    poly = Polyhedron(np.vstack(blocks), np.concatenate(rhs))
    try:
        return check_nonempty(poly, eps_feas).is_nonempty
    except IterationLimit:
        return True
