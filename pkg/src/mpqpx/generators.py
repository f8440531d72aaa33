"""Benchmark problem builders: condensed linear MPC as parametric QPs.

States are eliminated, so the decision variable is the stacked input
sequence, the parameter is the initial state, and the constraints are
input bounds plus (selected) state bounds over the horizon.  Builders
return the plain problem dictionary used by the file format, so equal
seeds produce byte-identical files.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg as sla

from .errors import ValidationError

KINDS = ("double_integrator", "random_stable")


def condense_dynamics(Ad: np.ndarray, Bd: np.ndarray, horizon: int
                      ) -> tuple[np.ndarray, np.ndarray]:
    """Stacked prediction matrices: x_k = (Gamma x0 + Phi U) rows k=1..N."""
    nx, nu = Bd.shape
    powers = [np.eye(nx)]
    for _ in range(horizon):
        powers.append(Ad @ powers[-1])
    gamma = np.vstack([powers[k] for k in range(1, horizon + 1)])
    phi = np.zeros((horizon * nx, horizon * nu))
    for k in range(1, horizon + 1):
        for j in range(k):
            phi[(k - 1) * nx:k * nx, j * nu:(j + 1) * nu] = \
                powers[k - 1 - j] @ Bd
    return gamma, phi


def condensed_mpc(Ad, Bd, Q, R, horizon: int, u_max, state_rows, state_bound,
                  theta_lower, theta_upper) -> dict:
    """Condensed MPC problem dictionary.

    ``state_rows`` (n_c, nx) selects the state combinations bounded by
    ``state_bound`` at every stage; inputs are bounded symmetrically by
    ``u_max``.  Constraint order: input upper, input lower, state upper,
    state lower.
    """
    Ad = np.asarray(Ad, dtype=float)
    Bd = np.asarray(Bd, dtype=float)
    nx, nu = Bd.shape
    gamma, phi = condense_dynamics(Ad, Bd, horizon)
    qbar = sla.block_diag(*[np.asarray(Q, dtype=float)] * horizon)
    rbar = sla.block_diag(*[np.asarray(R, dtype=float)] * horizon)
    H = phi.T @ qbar @ phi + rbar
    H = (H + H.T) / 2.0
    f_coeff = phi.T @ qbar @ gamma

    n = horizon * nu
    eye_u = np.eye(n)
    u_bound = np.tile(np.asarray(u_max, dtype=float), horizon)
    ebar = sla.block_diag(*[np.asarray(state_rows, dtype=float)] * horizon)
    ephi = ebar @ phi
    egamma = ebar @ gamma
    x_bound = np.tile(np.asarray(state_bound, dtype=float), horizon)

    A = np.vstack([eye_u, -eye_u, ephi, -ephi])
    b_coeff = np.vstack([np.zeros((2 * n, nx)), -egamma, egamma])
    b_offset = np.concatenate([u_bound, u_bound, x_bound, x_bound])

    theta_lower = np.asarray(theta_lower, dtype=float)
    theta_upper = np.asarray(theta_upper, dtype=float)
    G0 = np.vstack([np.eye(nx), -np.eye(nx)])
    g0 = np.concatenate([theta_upper, -theta_lower])

    return {
        "n": n,
        "m": A.shape[0],
        "p": nx,
        "H": H.tolist(),
        "f_coeff": f_coeff.tolist(),
        "f_offset": [0.0] * n,
        "A": A.tolist(),
        "b_coeff": b_coeff.tolist(),
        "b_offset": b_offset.tolist(),
        "theta0_G": G0.tolist(),
        "theta0_g": g0.tolist(),
    }


def double_integrator(horizon: int, seed: int = 0) -> dict:
    """Position/velocity chain with bounded input and bounded position.

    The instance is fixed (the seed is accepted for interface uniformity
    but does not influence it).  Per stage: two input rows and two
    position rows, so m = 4*horizon.
    """
    del seed
    Ad = [[1.0, 1.0], [0.0, 1.0]]
    Bd = [[0.5], [1.0]]
    Q = [[1.0, 0.0], [0.0, 0.1]]
    R = [[0.1]]
    return condensed_mpc(Ad, Bd, Q, R, horizon,
                         u_max=[1.0],
                         state_rows=[[1.0, 0.0]], state_bound=[5.0],
                         theta_lower=[-5.0, -2.5], theta_upper=[5.0, 2.5])


def random_stable(horizon: int, seed: int = 0) -> dict:
    """Random stable two-state single-input system, all states bounded."""
    rng = np.random.default_rng(seed)
    while True:
        Ad = rng.normal(size=(2, 2))
        radius = np.abs(np.linalg.eigvals(Ad)).max()
        if radius > 1e-6:
            break
    Ad = Ad * (0.95 * rng.uniform(0.6, 1.0) / radius)
    Bd = rng.normal(size=(2, 1))
    Bd = Bd / max(1.0, np.abs(Bd).max())
    Q = np.diag(rng.uniform(0.5, 2.0, size=2))
    R = np.array([[rng.uniform(0.05, 0.5)]])
    return condensed_mpc(Ad, Bd, Q, R, horizon,
                         u_max=[1.0],
                         state_rows=np.eye(2), state_bound=[4.0, 4.0],
                         theta_lower=[-3.0, -3.0], theta_upper=[3.0, 3.0])


def generate(kind: str, horizon: int, seed: int = 0) -> dict:
    if kind not in KINDS:
        raise ValidationError(
            f"unknown problem kind {kind!r}; expected one of {KINDS}"
        )
    if not isinstance(horizon, int) or horizon < 1:
        raise ValidationError("horizon must be a positive integer")
    builder = double_integrator if kind == "double_integrator" \
        else random_stable
    return builder(horizon, seed)
