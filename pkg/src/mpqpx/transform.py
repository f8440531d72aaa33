"""mpQP <-> least-distance transform via Cholesky factorization.

The convention is ``H = R' R`` with R upper triangular ("upper Cholesky
factor"); note that some references write ``H = L L'`` instead.  The
parametric QP

    min 0.5 x'Hx + f(theta)'x   s.t.  A x <= b(theta)

becomes, after substituting ``u = R (x + R^{-T} f(theta))``,

    min 0.5 ||u||^2             s.t.  M u <= d(theta)

with ``M = A R^{-1}`` and ``d(theta) = b(theta) + M R^{-T} f(theta)``, and
the original solution is recovered as ``x = R^{-1} (u - R^{-T} f(theta))``.
All applications of R^{-1} / R^{-T} are triangular solves; R is never
inverted explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import CholeskyFailure, ValidationError
from .model import AffineMap, MpLDP, MpQP, _frozen_matrix

# relative floor on Cholesky pivots; keeps the definiteness check scale-free
PIVOT_FLOOR = 1e-12
FACTOR_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class RecoveryData:
    """Upper Cholesky factor of H plus the linear cost, enough to map
    least-distance solutions back to the original QP variables."""

    R: np.ndarray
    f: AffineMap

    def __post_init__(self):
        R = _frozen_matrix(self.R, "R")
        n = R.shape[0]
        if R.shape != (n, n):
            raise ValidationError(f"R must be square, got {R.shape}")
        if n and np.abs(np.tril(R, -1)).max() > 0.0:
            raise ValidationError("R must be upper triangular")
        if n and np.diag(R).min() <= 0.0:
            raise ValidationError("R must have strictly positive diagonal")
        if self.f.rows != n:
            raise ValidationError(
                f"f has {self.f.rows} rows, expected n={n}"
            )
        object.__setattr__(self, "R", R)

    @property
    def n(self) -> int:
        return self.R.shape[0]


def _chol_upper(H: np.ndarray) -> np.ndarray:
    n = H.shape[0]
    try:
        L = np.linalg.cholesky(H)
    except np.linalg.LinAlgError:
        raise CholeskyFailure("H is not positive definite") from None
    pivots = np.diag(L) ** 2
    floor = PIVOT_FLOOR * np.trace(H) / n
    if pivots.min() <= floor:
        raise CholeskyFailure(
            f"Cholesky pivot {pivots.min():.3e} at or below relative floor "
            f"{floor:.3e}; H is numerically singular"
        )
    return L.T


def to_ldp(qp: MpQP) -> tuple[MpLDP, RecoveryData]:
    """Transform a validated MpQP into the equivalent least-distance form."""
    R = _chol_upper(qp.H)
    err = np.abs(R.T @ R - qp.H).max() if qp.n else 0.0
    if err > FACTOR_TOL * (1.0 + np.abs(qp.H).max()):
        raise CholeskyFailure(
            f"factor reconstruction error {err:.3e} exceeds tolerance"
        )
    M = sla.solve_triangular(R, qp.A.T, trans="T", lower=False).T
    rtf_coeff = sla.solve_triangular(R, qp.f.coeff, trans="T", lower=False)
    rtf_offset = sla.solve_triangular(R, qp.f.offset, trans="T", lower=False)
    d = AffineMap(qp.b.coeff + M @ rtf_coeff, qp.b.offset + M @ rtf_offset)
    return MpLDP(M, d, qp.theta0), RecoveryData(R, qp.f)


def recover_solution(rec: RecoveryData, u_map: AffineMap) -> AffineMap:
    """Map an affine least-distance solution to QP space, coefficient-wise.

    Returns the map ``theta -> R^{-1} (u(theta) - R^{-T} f(theta))``; no
    per-theta work remains after this composition.
    """
    if u_map.rows != rec.n:
        raise ValueError(
            f"u_map has {u_map.rows} rows, expected n={rec.n}"
        )
    if u_map.params != rec.f.params:
        raise ValueError(
            f"u_map depends on {u_map.params} parameters, f on {rec.f.params}"
        )
    R = rec.R
    inner_c = u_map.coeff - sla.solve_triangular(R, rec.f.coeff, trans="T",
                                                 lower=False)
    inner_o = u_map.offset - sla.solve_triangular(R, rec.f.offset, trans="T",
                                                  lower=False)
    return AffineMap(sla.solve_triangular(R, inner_c, lower=False),
                     sla.solve_triangular(R, inner_o, lower=False))


def recover_point(rec: RecoveryData, u: np.ndarray,
                  theta: np.ndarray) -> np.ndarray:
    """Map a single least-distance solution at ``theta`` to QP space."""
    f_val = rec.f(np.asarray(theta, dtype=float))
    inner = np.asarray(u, dtype=float) - sla.solve_triangular(
        rec.R, f_val, trans="T", lower=False)
    return sla.solve_triangular(rec.R, inner, lower=False)
