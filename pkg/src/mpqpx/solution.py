"""Explicit solutions: assembly, point location, and serialization.

An explicit solution is the list of critical-region records in original
QP variables plus the recovery data, the exploration statistics, and the
tolerances that were used.  It is read-only after construction, so one
loaded solution can be evaluated from many threads at once.

Point location: among records whose region contains the query within the
feasibility tolerance (violations measured on unit-normalized rows),
the winner minimizes the maximum violation; ties go to the smaller active
set, then lexicographically.  On shared boundaries the affine laws of the
tied records agree, so any winner is correct.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import BadSeed, OutsideSolution, ParseError, ValidationError
from .explorer import ExplorationState, explore, initial_active_set
from .feasibility import EPS_FEAS
from .model import ActiveSet, AffineMap, MpQP, Polyhedron
from .problem_io import canonical_dumps, problem_digest
from .regions import RANK_TOL
from .transform import RecoveryData, recover_solution, to_ldp

_FORMAT = "mpqpx-solution-1"


@dataclass
class SolveOptions:
    eps_feas: float = EPS_FEAS
    rank_tol: float = RANK_TOL
    init_seed: int = 0
    init_retries: int = 3
    order: str = "dfs"


@dataclass(frozen=True, eq=False)
class SolutionRecord:
    """One critical region with its laws in QP space."""

    active_set: ActiveSet
    region: Polyhedron
    x_map: AffineMap
    lambda_map: AffineMap


@dataclass(frozen=True, eq=False)
class ExplicitSolution:
    problem_hash: str
    n: int
    m: int
    p: int
    tolerances: dict
    recovery: RecoveryData
    theta0: Polyhedron
    records: list[SolutionRecord]
    stats: dict

    @property
    def eps_feas(self) -> float:
        return float(self.tolerances["eps_feas"])

    def active_sets(self) -> set[ActiveSet]:
        return {r.active_set for r in self.records}


def compute_explicit_solution(qp: MpQP,
                              options: SolveOptions | None = None,
                              ) -> tuple[ExplicitSolution, ExplorationState]:
    """Full pipeline: transform, initialize, explore, recover, assemble."""
    opts = options or SolveOptions()
    ldp_problem, recovery = to_ldp(qp)
    state = None
    failure: BadSeed | None = None
    for retry in range(max(1, opts.init_retries)):
        a0 = initial_active_set(ldp_problem, eps_feas=opts.eps_feas,
                                rank_tol=opts.rank_tol,
                                seed=opts.init_seed + retry)
        try:
            state = explore(ldp_problem, a0, eps_feas=opts.eps_feas,
                            rank_tol=opts.rank_tol, order=opts.order)
            break
        except BadSeed as exc:
            failure = exc
    if state is None:
        raise failure
    records = []
    for rec in state.records:
        records.append(SolutionRecord(
            rec.active_set, rec.region,
            recover_solution(recovery, rec.u_map), rec.lambda_map))
    stats = state.counters.as_dict()
    stats["explored"] = state.explored_count
    solution = ExplicitSolution(
        problem_hash=problem_digest(qp), n=qp.n, m=qp.m, p=qp.p,
        tolerances={"eps_feas": float(opts.eps_feas),
                    "rank_tol": float(opts.rank_tol)},
        recovery=recovery, theta0=qp.theta0, records=records, stats=stats)
    return solution, state


def locate_many(sol: ExplicitSolution, thetas: np.ndarray) -> np.ndarray:
    """Owning record index for each row of ``thetas`` (-1 when uncovered).

    Records are pre-sorted by (cardinality, indices), so taking the first
    row achieving the minimum violation applies the documented tie-break.
    """
    thetas = np.asarray(thetas, dtype=float)
    if thetas.ndim != 2 or thetas.shape[1] != sol.p:
        raise ValidationError(
            f"theta batch has shape {thetas.shape}, expected (*, {sol.p})"
        )
    k = thetas.shape[0]
    if not sol.records:
        return np.full(k, -1, dtype=int)
    viol = np.empty((len(sol.records), k))
    for r, rec in enumerate(sol.records):
        Gn, gn = rec.region.normalized()
        if rec.region.rows == 0:
            viol[r] = -np.inf
        else:
            viol[r] = (Gn @ thetas.T - gn[:, None]).max(axis=0)
    best = viol.min(axis=0)
    owner = (viol == best[None, :]).argmax(axis=0)
    return np.where(best <= sol.eps_feas, owner, -1)


def evaluate(sol: ExplicitSolution, theta: np.ndarray
             ) -> tuple[np.ndarray, ActiveSet]:
    """Point location followed by evaluation of the owning affine law."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (sol.p,):
        raise ValidationError(
            f"theta has shape {theta.shape}, expected ({sol.p},)"
        )
    owner = int(locate_many(sol, theta[None, :])[0])
    if owner < 0:
        raise OutsideSolution(
            f"theta={np.array2string(theta, precision=6)} is not covered "
            f"by any critical region"
        )
    rec = sol.records[owner]
    return rec.x_map(theta), rec.active_set


def solution_to_dict(sol: ExplicitSolution) -> dict:
    return {
        "format": _FORMAT,
        "problem_hash": sol.problem_hash,
        "n": sol.n,
        "m": sol.m,
        "p": sol.p,
        "tolerances": {k: float(v) for k, v in sol.tolerances.items()},
        "recovery": {
            "R": sol.recovery.R.tolist(),
            "f_coeff": sol.recovery.f.coeff.tolist(),
            "f_offset": sol.recovery.f.offset.tolist(),
        },
        "theta0_G": sol.theta0.G.tolist(),
        "theta0_g": sol.theta0.g.tolist(),
        "stats": {k: int(v) for k, v in sol.stats.items()},
        "records": [
            {
                "active_set": list(rec.active_set.one_based()),
                "region_G": rec.region.G.tolist(),
                "region_g": rec.region.g.tolist(),
                "x_coeff": rec.x_map.coeff.tolist(),
                "x_offset": rec.x_map.offset.tolist(),
                "lambda_coeff": rec.lambda_map.coeff.tolist(),
                "lambda_offset": rec.lambda_map.offset.tolist(),
            }
            for rec in sol.records
        ],
    }


def solution_from_dict(doc: dict) -> ExplicitSolution:
    if not isinstance(doc, dict) or doc.get("format") != _FORMAT:
        raise ParseError(f"not a {_FORMAT} document")
    try:
        recovery = RecoveryData(
            np.array(doc["recovery"]["R"], dtype=float),
            AffineMap(np.array(doc["recovery"]["f_coeff"], dtype=float),
                      np.array(doc["recovery"]["f_offset"], dtype=float)))
        records = [
            SolutionRecord(
                ActiveSet.from_one_based(r["active_set"]),
                Polyhedron(np.array(r["region_G"], dtype=float),
                           np.array(r["region_g"], dtype=float)),
                AffineMap(np.array(r["x_coeff"], dtype=float),
                          np.array(r["x_offset"], dtype=float)),
                AffineMap(np.array(r["lambda_coeff"], dtype=float),
                          np.array(r["lambda_offset"], dtype=float)))
            for r in doc["records"]
        ]
        theta0 = Polyhedron(np.array(doc["theta0_G"], dtype=float),
                            np.array(doc["theta0_g"], dtype=float))
        return ExplicitSolution(
            problem_hash=str(doc["problem_hash"]),
            n=int(doc["n"]), m=int(doc["m"]), p=int(doc["p"]),
            tolerances={k: float(v) for k, v in doc["tolerances"].items()},
            recovery=recovery, theta0=theta0, records=records,
            stats={k: int(v) for k, v in doc["stats"].items()})
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed solution document: {exc}") from None


def save_solution(sol: ExplicitSolution, path) -> None:
    Path(path).write_text(canonical_dumps(solution_to_dict(sol)))


def load_solution(path) -> ExplicitSolution:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from None
    return solution_from_dict(doc)
