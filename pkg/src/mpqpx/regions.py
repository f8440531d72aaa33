"""Critical-region construction for a candidate active set.

For an active set A with linearly independent rows M_A, the KKT system of
the least-distance problem pins down affine maps of theta:

    dual       lambda_A(theta) = -(M_A M_A')^{-1} d_A(theta)
    primal     u(theta)        = -M_A' lambda_A(theta)
    slacks     mu_Abar(theta)  = d_Abar(theta) - M_Abar u(theta)

and the critical region is the polyhedron where multipliers and slacks are
nonnegative, intersected with the parameter set.  No redundancy removal is
performed anywhere; downstream feasibility checks tolerate redundant rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import GramSingular
from .model import ActiveSet, AffineMap, MpLDP, Polyhedron

RANK_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class CriticalRegionRecord:
    """An active set with its region polyhedron and solution maps.

    ``region`` includes the parameter-set rows, so the record is
    self-contained for point location.  ``x_map`` (the law in original QP
    variables) is attached by the caller once recovery data is available.
    """

    active_set: ActiveSet
    region: Polyhedron
    lambda_map: AffineMap
    u_map: AffineMap
    x_map: AffineMap | None = None


def licq(ldp: MpLDP, a: ActiveSet, rank_tol: float = RANK_TOL) -> bool:
    """Check that the rows of M indexed by ``a`` are linearly independent.

    Rank is read off a column-pivoted QR of M_A'; the threshold is relative
    to the largest row norm of M_A (the first pivot).  Sets with more than
    n elements fail immediately.
    """
    k = len(a)
    if k == 0:
        return True
    if k > ldp.n:
        return False
    Ma = ldp.M[a.array()]
    r_diag = np.abs(np.diag(
        sla.qr(Ma.T, mode="r", pivoting=True)[0][:k, :k]))
    if r_diag[0] <= 0.0:
        return False
    return bool(r_diag.min() > rank_tol * r_diag[0])


def dual_map(ldp: MpLDP, a: ActiveSet) -> AffineMap:
    """Affine multiplier map of the active constraints (one row per index).

    Solved through a Cholesky factorization of the Gram matrix M_A M_A'.
    Requires ``licq`` to hold; if the factorization fails regardless, the
    rank tolerance and the pivot test disagree and GramSingular is raised.
    """
    if len(a) == 0:
        return AffineMap(np.zeros((0, ldp.p)), np.zeros(0))
    idx = a.array()
    Ma = ldp.M[idx]
    gram = Ma @ Ma.T
    try:
        cf = sla.cho_factor(gram, lower=False)
    except np.linalg.LinAlgError as exc:
        raise GramSingular(
            f"Gram factorization failed for active set {a.one_based()}: "
            f"{exc}"
        ) from None
    return AffineMap(-sla.cho_solve(cf, ldp.d.coeff[idx]),
                     -sla.cho_solve(cf, ldp.d.offset[idx]))


def primal_map(ldp: MpLDP, a: ActiveSet, lam: AffineMap) -> AffineMap:
    """Optimal primal map ``u(theta) = -M_A' lambda_A(theta)``."""
    if lam.rows != len(a):
        raise ValueError(
            f"lambda map has {lam.rows} rows for an active set of size {len(a)}"
        )
    Mat = ldp.M[a.array()].T
    return AffineMap(-(Mat @ lam.coeff), -(Mat @ lam.offset))


def slack_map(ldp: MpLDP, a: ActiveSet, u: AffineMap) -> AffineMap:
    """Slacks of the inactive constraints, rows by increasing index."""
    comp = np.array(a.complement(ldp.m), dtype=np.intp)
    Mc = ldp.M[comp]
    return AffineMap(ldp.d.coeff[comp] - Mc @ u.coeff,
                     ldp.d.offset[comp] - Mc @ u.offset)


def build_region(ldp: MpLDP, a: ActiveSet) -> CriticalRegionRecord:
    """Assemble the critical-region record for an active set with LICQ.

    The region stacks the inactive-slack rows, the multiplier-sign rows,
    and the parameter-set rows (in that order), each rewritten in
    ``G theta <= g`` form.
    """
    lam = dual_map(ldp, a)
    u = primal_map(ldp, a, lam)
    mu = slack_map(ldp, a, u)
    G = np.vstack([-mu.coeff, -lam.coeff, ldp.theta0.G])
    g = np.concatenate([mu.offset, lam.offset, ldp.theta0.g])
    return CriticalRegionRecord(a, Polyhedron(G, g), lam, u)
