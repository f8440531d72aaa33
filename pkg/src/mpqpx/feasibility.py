"""Nonemptiness checks for candidate critical regions.

A region is declared nonempty iff the least-distance problem
``min ||theta||^2`` over it has a solution; emptiness is certified by a
Farkas vector.  No interior is required: regions that are nonempty but
lower-dimensional still come back NonEmpty, which is what keeps the
exploration connected in degenerate cases.  Rows are normalized to unit
normals internally so a single absolute tolerance is meaningful.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import ldp
from .errors import IterationLimit
from .model import ZERO_ROW_TOL, Polyhedron

EPS_FEAS = 1e-8

# slack threshold (relative to eps_feas) for classifying rows as active at
# the witness when probing for lower-dimensionality
_THIN_ACTIVE_FACTOR = 10.0
_THIN_RESIDUAL = 1e-8


class FeasStatus(enum.Enum):
    NONEMPTY = "nonempty"
    EMPTY = "empty"


@dataclass(frozen=True)
class FeasibilityResult:
    """Nonemptiness verdict with evidence.

    ``witness`` is a point violating no row by more than ``eps_feas``
    (NonEmpty only); ``certificate`` is a nonnegative row combination with
    y'G = 0 and y'g < 0 (Empty only).  ``lower_dimensional`` marks regions
    whose active rows at the witness are positively linearly dependent,
    i.e. the region has no interior.
    """

    status: FeasStatus
    witness: np.ndarray | None = None
    max_violation: float = np.inf
    lower_dimensional: bool = False
    certificate: np.ndarray | None = None

    @property
    def is_nonempty(self) -> bool:
        return self.status is FeasStatus.NONEMPTY


def _probe_thin(Gn: np.ndarray, gn: np.ndarray, witness: np.ndarray,
                eps_feas: float) -> bool:
    """Certify lower-dimensionality from the rows active at the witness.

    The region is pinched onto a hyperplane iff some nonzero y >= 0
    combines active unit normals to zero; decided by a tiny NNLS with a
    sum-to-one row.
    """
    slack = gn - Gn @ witness
    act = np.flatnonzero(np.abs(slack) <= _THIN_ACTIVE_FACTOR * eps_feas)
    if act.size < 2:
        return False
    p = Gn.shape[1]
    E = np.vstack([Gn[act].T, np.ones((1, act.size))])
    f = np.zeros(p + 1)
    f[p] = 1.0
    _, rnorm, _, ok = ldp.nnls(E, f)
    return bool(ok and rnorm <= _THIN_RESIDUAL)


def check_nonempty(P: Polyhedron, eps_feas: float = EPS_FEAS,
                   max_iter: int | None = None,
                   detect_thin: bool = True) -> FeasibilityResult:
    """Decide whether ``{theta : G theta <= g}`` is nonempty.

    Raises IterationLimit when the underlying solve stalls or returns an
    answer that fails its own evidence check; callers that must make
    progress treat that outcome as (conservatively) nonempty.
    """
    if not eps_feas > 0.0:
        raise ValueError("eps_feas must be positive")
    if P.trivially_empty:
        # some zero-normal row has a negative offset: it is its own
        # Farkas certificate
        zero = P.row_norms <= ZERO_ROW_TOL * (1.0 + np.abs(P.g))
        bad = int(np.flatnonzero(zero & (P.g < 0.0))[0])
        cert = np.zeros(P.rows)
        cert[bad] = 1.0
        return FeasibilityResult(FeasStatus.EMPTY, certificate=cert)
    if P.rows == 0:
        return FeasibilityResult(FeasStatus.NONEMPTY,
                                 witness=np.zeros(P.dim), max_violation=0.0)
    Gn, gn = P.normalized()
    res = ldp.min_norm_point(Gn, gn, max_iter)
    if res.status == ldp.STALLED:
        raise IterationLimit(
            f"feasibility solve stalled after {res.iterations} iterations "
            f"(residual {res.residual:.3e})"
        )
    if res.status == ldp.INFEASIBLE:
        y = res.certificate
        combo = np.abs(Gn.T @ y).max()
        value = gn @ y
        if combo > 1e-6 * max(1.0, np.abs(y).sum()) or value >= 0.0:
            raise IterationLimit(
                f"emptiness certificate failed verification "
                f"(|y'G|={combo:.3e}, y'g={value:.3e})"
            )
        return FeasibilityResult(FeasStatus.EMPTY, certificate=y)
    witness = res.point
    max_violation = float((Gn @ witness - gn).max())
    if max_violation > eps_feas:
        raise IterationLimit(
            f"witness violates rows by {max_violation:.3e} > eps_feas"
        )
    thin = _probe_thin(Gn, gn, witness, eps_feas) if detect_thin else False
    return FeasibilityResult(FeasStatus.NONEMPTY, witness=witness,
                             max_violation=max_violation,
                             lower_dimensional=thin)
