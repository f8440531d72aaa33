"""Stack-driven exploration of combinatorially adjacent active sets.

Starting from one optimal active set, the explorer repeatedly pops a
candidate, checks the rank condition, builds its critical region and tests
it for nonemptiness.  Nonempty candidates are recorded and all unexplored
sets reachable by adding or removing a single index are pushed; candidates
that fail the rank condition only push their subsets (supersets of a
rank-deficient set stay rank-deficient).  Because optimal active sets form
a connected graph under single-index moves, this visits every one of them.

The explored set is keyed by bitmask, the frontier is a deque shared by
the depth-first (default) and breadth-first pop disciplines, and all
heavy work happens on immutable inputs so a future multi-worker frontier
only needs an insert-if-absent explored set.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import (BadSeed, InfeasibleProblem, IterationLimit,
                     NoStartFound, SequenceFailure)
from .feasibility import EPS_FEAS, check_nonempty
from .ldp import FEASIBLE, project_point
from .model import ActiveSet, MpLDP, Polyhedron
from .oracle import pointwise_solve
from .regions import RANK_TOL, CriticalRegionRecord, build_region, licq

logger = logging.getLogger(__name__)

MAX_PERTURBATIONS = 50


@dataclass
class ExploreCounters:
    popped: int = 0
    licq_fail: int = 0
    feas_calls: int = 0
    nonempty: int = 0
    empty: int = 0
    thin_nonempty: int = 0
    stalled_kept: int = 0

    def as_dict(self) -> dict:
        return {
            "popped": self.popped,
            "licq_fail": self.licq_fail,
            "feas_calls": self.feas_calls,
            "nonempty": self.nonempty,
            "empty": self.empty,
            "thin_nonempty": self.thin_nonempty,
            "stalled_kept": self.stalled_kept,
        }


@dataclass
class ExplorationState:
    """Frontier, explored-set and results of one exploration run.

    Invariants: every member of the frontier is already in ``explored``
    (they are inserted together), result keys are a subset of ``explored``,
    and at termination ``popped == licq_fail + feas_calls``.
    """

    stack: deque = field(default_factory=deque)
    explored: set[int] = field(default_factory=set)
    result: dict[ActiveSet, CriticalRegionRecord] = field(default_factory=dict)
    counters: ExploreCounters = field(default_factory=ExploreCounters)

    @property
    def explored_count(self) -> int:
        return len(self.explored)

    @property
    def records(self) -> list[CriticalRegionRecord]:
        return sorted(self.result.values(),
                      key=lambda r: r.active_set.sort_key)

    def active_sets(self) -> set[ActiveSet]:
        return set(self.result.keys())


def _push_unexplored(cands, state: ExplorationState) -> list[ActiveSet]:
    pushed = []
    for cand in cands:
        if cand.mask not in state.explored:
            state.explored.add(cand.mask)
            state.stack.append(cand)
            pushed.append(cand)
    return pushed


def _supersets(a: ActiveSet, m: int):
    return (a.with_index(i) for i in range(m) if i not in a)


def _subsets(a: ActiveSet):
    return (a.without_index(i) for i in a)


def explore(ldp_problem: MpLDP, a0: ActiveSet, *,
            eps_feas: float = EPS_FEAS, rank_tol: float = RANK_TOL,
            order: str = "dfs", observer=None) -> ExplorationState:
    """Enumerate all optimal active sets reachable from ``a0``.

    ``a0`` is trusted to be optimal with independent rows; if its first
    pop disproves that, BadSeed is raised and the caller should
    re-initialize.  A stalled feasibility check keeps the candidate
    (conservative) and is counted in ``stalled_kept``.  With
    ``order="bfs"`` the frontier is popped first-in-first-out instead;
    the result set is identical either way.
    """
    if order not in ("dfs", "bfs"):
        raise ValueError(f"unknown pop order {order!r}")
    m = ldp_problem.m
    state = ExplorationState()
    state.stack.append(a0)
    state.explored.add(a0.mask)
    c = state.counters
    while state.stack:
        a = state.stack.pop() if order == "dfs" else state.stack.popleft()
        c.popped += 1
        first = c.popped == 1
        if licq(ldp_problem, a, rank_tol):
            record = build_region(ldp_problem, a)
            c.feas_calls += 1
            thin = False
            try:
                res = check_nonempty(record.region, eps_feas)
                nonempty = res.is_nonempty
                thin = res.lower_dimensional
            except IterationLimit as exc:
                nonempty = True
                c.stalled_kept += 1
                logger.warning(
                    "feasibility check stalled for %s; keeping region (%s)",
                    a.one_based(), exc)
            if nonempty:
                c.nonempty += 1
                if thin:
                    c.thin_nonempty += 1
                state.result[a] = record
                pushed = _push_unexplored(_supersets(a, m), state)
                pushed += _push_unexplored(_subsets(a), state)
                branch = "nonempty"
            else:
                if first:
                    raise BadSeed(
                        f"initial active set {a.one_based()} has an empty "
                        f"region"
                    )
                c.empty += 1
                pushed = []
                branch = "empty"
        else:
            if first:
                raise BadSeed(
                    f"initial active set {a.one_based()} fails the rank "
                    f"condition"
                )
            c.licq_fail += 1
            pushed = _push_unexplored(_subsets(a), state)
            branch = "licq_fail"
        if observer is not None:
            observer(a, branch, pushed)
        logger.debug(
            "pop=%s branch=%s popped=%d licq_fail=%d feas_calls=%d "
            "nonempty=%d empty=%d frontier=%d",
            a.one_based(), branch, c.popped, c.licq_fail, c.feas_calls,
            c.nonempty, c.empty, len(state.stack))
    return state


def _support_set(lam: np.ndarray) -> ActiveSet:
    tol = 1e-9 * (1.0 + float(np.abs(lam).max(initial=0.0)))
    return ActiveSet(np.flatnonzero(lam > tol))


def initial_active_set(ldp_problem: MpLDP, *, eps_feas: float = EPS_FEAS,
                       rank_tol: float = RANK_TOL, seed: int = 0,
                       max_perturbations: int = MAX_PERTURBATIONS) -> ActiveSet:
    """Find one optimal active set with independent rows.

    Solves the least-distance problem at a feasible parameter; when the
    active set there is rank-deficient (weakly active rows), retries at
    deterministically seeded perturbed parameters projected back into the
    parameter set, and finally falls back to the empty set if the
    unconstrained optimum is feasible somewhere.
    """
    theta0 = ldp_problem.theta0
    t0 = check_nonempty(theta0, eps_feas)
    if not t0.is_nonempty:
        raise InfeasibleProblem("the parameter set is empty")
    theta_hat = t0.witness
    Gn, gn = theta0.normalized()
    rng = np.random.default_rng(seed)
    scale = 1e-3 * (1.0 + float(np.abs(theta_hat).max(initial=0.0)))

    samples = []
    any_optimal = False
    for attempt in range(max_perturbations + 1):
        if attempt == 0:
            theta = theta_hat
        else:
            delta = rng.normal(size=ldp_problem.p) * scale * 1.3 ** attempt
            proj = project_point(Gn, gn, theta_hat + delta)
            if proj.status != FEASIBLE:
                continue
            theta = proj.point
        samples.append(theta)
        try:
            sol = pointwise_solve(ldp_problem, theta)
        except IterationLimit:
            continue
        if not sol.is_optimal:
            continue
        any_optimal = True
        for cand in (sol.active_set, _support_set(sol.lam)):
            if licq(ldp_problem, cand, rank_tol):
                return cand

    # empty set fallback: u = 0 must be feasible somewhere in the
    # parameter set
    d = ldp_problem.d
    zero_region = Polyhedron(np.vstack([-d.coeff, theta0.G]),
                             np.concatenate([d.offset, theta0.g]))
    try:
        if check_nonempty(zero_region, eps_feas).is_nonempty:
            return ActiveSet(())
    except IterationLimit:
        pass
    if not any_optimal:
        raise InfeasibleProblem(
            "the least-distance problem is infeasible at every sampled "
            "parameter"
        )
    raise NoStartFound(
        f"no rank-qualified optimal active set found after "
        f"{len(samples)} samples: "
        + ", ".join(np.array2string(s, precision=4) for s in samples[:8])
        + ("..." if len(samples) > 8 else "")
    )


def valid_sequence(ldp_problem: MpLDP, a: ActiveSet, a_tilde: ActiveSet,
                   membership, rank_tol: float = RANK_TOL) -> list[ActiveSet]:
    """Build a combinatorial sequence from ``a`` to ``a_tilde``.

    Consecutive members differ by one index, every member satisfies the
    caller-supplied ``membership`` test (nonempty region, however the
    caller defines it), and no two consecutive members are both
    rank-deficient.  Both endpoints must be optimal with independent rows
    and geometrically adjacent; under those assumptions a valid step
    always exists, so failure to find one is reported as a numerical
    incident rather than skipped.
    """
    cache: dict[int, bool] = {}

    def member(s: ActiveSet) -> bool:
        if s.mask not in cache:
            cache[s.mask] = bool(membership(s))
        return cache[s.mask]

    plus = [i for i in a_tilde.indices if i not in a]
    minus = [i for i in a.indices if i not in a_tilde]
    current = a
    seq = [current]
    while plus or minus:
        if plus and licq(ldp_problem, current, rank_tol):
            step = next((i for i in plus
                         if member(current.with_index(i))), None)
            if step is None:
                raise SequenceFailure(
                    f"no addable index keeps the region nonempty at "
                    f"{current.one_based()} (candidates "
                    f"{[i + 1 for i in plus]})"
                )
            plus.remove(step)
            current = current.with_index(step)
        else:
            step = next(
                (i for i in minus
                 if licq(ldp_problem, current.without_index(i), rank_tol)
                 and member(current.without_index(i))), None)
            if step is None:
                raise SequenceFailure(
                    f"no removable index restores the rank condition at "
                    f"{current.one_based()} (candidates "
                    f"{[i + 1 for i in minus]}, remaining additions "
                    f"{[i + 1 for i in plus]})"
                )
            minus.remove(step)
            current = current.without_index(step)
        seq.append(current)
    return seq
