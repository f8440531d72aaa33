"""Least-distance solves via nonnegative least squares.

The single primitive here decides ``min 0.5||z||^2 s.t. G z <= g`` through
the classic reduction to an NNLS problem: stack ``E = [-G', -g']`` column
per constraint, solve ``min ||E y - e|| , y >= 0`` with ``e`` the last unit
vector, and read the minimizer (or a Farkas infeasibility certificate) off
the residual.  The NNLS itself is a dual active-set iteration with
smallest-index (Bland-style) entering selection, so runs are deterministic
and cycling-free in exact arithmetic.

Everything downstream (region feasibility checks, fixed-theta solves,
projections) is phrased in terms of :func:`min_norm_point`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"
STALLED = "stalled"

# NNLS residual at or below this level means the target lies in the cone of
# the constraint columns, i.e. a Farkas certificate of infeasibility exists.
_INFEASIBLE_RESIDUAL = 1e-10


@dataclass(frozen=True)
class LdpResult:
    """Outcome of a least-distance solve over ``{z : G z <= g}``.

    ``multipliers`` are the KKT multipliers of the rows (z = -G' y, y >= 0);
    ``certificate`` is a Farkas vector (y >= 0, y'G = 0, y'g < 0) when the
    polyhedron is empty.  ``status`` is ``STALLED`` when the iteration cap
    was hit or the residual could not be interpreted.
    """

    status: str
    point: np.ndarray | None = None
    multipliers: np.ndarray | None = None
    certificate: np.ndarray | None = None
    residual: float = np.nan
    iterations: int = 0


def nnls(E: np.ndarray, f: np.ndarray, max_iter: int | None = None):
    """Minimize ``||E u - f||`` subject to ``u >= 0``.

    Lawson-Hanson active-set iteration; the entering column is the
    smallest-index one with a positive gradient.  Returns
    ``(u, rnorm, iterations, converged)``.
    """
    E = np.asarray(E, dtype=float)
    f = np.asarray(f, dtype=float)
    n_col = E.shape[1]
    if n_col == 0:
        return np.zeros(0), float(np.linalg.norm(f)), 0, True
    if max_iter is None:
        max_iter = 100 + 20 * n_col

    u = np.zeros(n_col)
    passive = np.zeros(n_col, dtype=bool)
    # gradient threshold: |w_j| <= ||E_j|| * ||r||, so scale per column
    col_scale = np.sqrt((E * E).sum(axis=0))
    col_scale[col_scale == 0.0] = 1.0
    grad_tol = 1e-11 * col_scale * max(1.0, float(np.linalg.norm(f)))
    banned = np.zeros(n_col, dtype=bool)

    iters = 0
    while iters <= max_iter:
        grad = E.T @ (f - E @ u)
        eligible = np.flatnonzero(~passive & ~banned & (grad > grad_tol))
        if eligible.size == 0:
            return u, float(np.linalg.norm(f - E @ u)), iters, True
        j = int(eligible[0])
        passive[j] = True
        while iters <= max_iter:
            iters += 1
            idx = np.flatnonzero(passive)
            z, *_ = np.linalg.lstsq(E[:, idx], f, rcond=None)
            if z.min() > 0.0:
                u[:] = 0.0
                u[idx] = z
                banned[:] = False
                break
            old = u[idx]
            blocking = z <= 0.0
            denom = old[blocking] - z[blocking]
            safe = np.where(denom > 0.0, denom, 1.0)
            steps = np.where(denom > 0.0, old[blocking] / safe, 0.0)
            alpha = float(min(steps.min(), 1.0)) if steps.size else 0.0
            u[idx] = np.maximum(old + alpha * (z - old), 0.0)
            drop = passive & (u <= 1e-14 * (1.0 + u.max()))
            u[drop] = 0.0
            passive[drop] = False
            if alpha == 0.0 and drop[j]:
                # entering column immediately blocked (roundoff): exclude
                # it until some other column makes progress
                banned[j] = True
                break
    return u, float(np.linalg.norm(f - E @ u)), iters, False


def min_norm_point(G: np.ndarray, g: np.ndarray,
                   max_iter: int | None = None) -> LdpResult:
    """Solve ``min 0.5||z||^2 s.t. G z <= g`` or certify emptiness.

    Feasibility of the polyhedron is equivalent to the NNLS residual being
    nonzero; when it (numerically) vanishes the NNLS weights are a Farkas
    certificate.  Callers are expected to hand in rows of comparable scale
    (unit normals) so the fixed residual threshold is meaningful.
    """
    G = np.asarray(G, dtype=float)
    g = np.asarray(g, dtype=float)
    q, p = G.shape
    if q == 0:
        return LdpResult(FEASIBLE, point=np.zeros(p),
                         multipliers=np.zeros(0), residual=1.0)
    E = np.vstack([-G.T, -g[None, :]])
    f = np.zeros(p + 1)
    f[p] = 1.0
    u, rnorm, iters, ok = nnls(E, f, max_iter)
    if not ok:
        return LdpResult(STALLED, residual=rnorm, iterations=iters)
    if rnorm <= _INFEASIBLE_RESIDUAL:
        return LdpResult(INFEASIBLE, certificate=u,
                         residual=rnorm, iterations=iters)
    r = E @ u - f
    r_last = r[p]
    if r_last >= -1e-13:
        # feasible problems have r_last < 0; anything else is distress
        return LdpResult(STALLED, residual=rnorm, iterations=iters)
    z = -r[:p] / r_last
    y = u / (-r_last)
    return LdpResult(FEASIBLE, point=z, multipliers=y,
                     residual=rnorm, iterations=iters)


def project_point(G: np.ndarray, g: np.ndarray, c: np.ndarray,
                  max_iter: int | None = None) -> LdpResult:
    """Euclidean projection of ``c`` onto ``{z : G z <= g}``."""
    G = np.asarray(G, dtype=float)
    g = np.asarray(g, dtype=float)
    c = np.asarray(c, dtype=float)
    res = min_norm_point(G, g - G @ c if G.shape[0] else g, max_iter)
    if res.status != FEASIBLE:
        return res
    return LdpResult(FEASIBLE, point=res.point + c,
                     multipliers=res.multipliers,
                     residual=res.residual, iterations=res.iterations)
