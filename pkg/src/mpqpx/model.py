"""Core value types: affine maps, polyhedra, active sets, problem forms.

Conventions used everywhere in this package:

* an affine map is ``v(theta) = offset + coeff @ theta``;
* a polyhedron is ``{theta : G @ theta <= g}``;
* constraint indices are 0-based in memory; problem/solution files and
  CLI output use 1-based indices, converted once in the io layer.

All types are immutable after construction (arrays are frozen), so they
can be shared freely between concurrent readers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from .errors import ValidationError

# Rows of a polyhedron whose normal is (numerically) zero cannot be
# normalized; they are resolved once at construction, see Polyhedron.
ZERO_ROW_TOL = 1e-12
SYMMETRY_TOL = 1e-10


def _frozen_matrix(a, name: str) -> np.ndarray:
    a = np.array(a, dtype=float, order="C")
    if a.ndim != 2:
        raise ValidationError(f"{name} must be a 2-d array, got ndim={a.ndim}")
    if a.size and not np.isfinite(a).all():
        raise ValidationError(f"{name} contains non-finite entries")
    a += 0.0  # normalize -0.0 for stable serialization
    a.flags.writeable = False
    return a


def _frozen_vector(a, name: str) -> np.ndarray:
    a = np.array(a, dtype=float, order="C")
    if a.ndim != 1:
        raise ValidationError(f"{name} must be a 1-d array, got ndim={a.ndim}")
    if a.size and not np.isfinite(a).all():
        raise ValidationError(f"{name} contains non-finite entries")
    a += 0.0  # normalize -0.0 for stable serialization
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class AffineMap:
    """Matrix-plus-offset map ``theta -> offset + coeff @ theta``.

    ``coeff`` has shape (r, p) and ``offset`` shape (r,); every
    theta-dependent quantity in the package (costs, constraint offsets,
    multipliers, primal solutions) is stored in this form.
    """

    coeff: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeff", _frozen_matrix(self.coeff, "coeff"))
        object.__setattr__(self, "offset", _frozen_vector(self.offset, "offset"))
        if self.coeff.shape[0] != self.offset.shape[0]:
            raise ValidationError(
                f"coeff has {self.coeff.shape[0]} rows but offset has "
                f"{self.offset.shape[0]} entries"
            )

    @property
    def rows(self) -> int:
        return self.coeff.shape[0]

    @property
    def params(self) -> int:
        return self.coeff.shape[1]

    def __call__(self, theta: np.ndarray) -> np.ndarray:
        return eval_affine(self, theta)

    def eval_many(self, thetas: np.ndarray) -> np.ndarray:
        """Evaluate at a (k, p) batch of parameters; returns (k, r)."""
        thetas = np.asarray(thetas, dtype=float)
        return thetas @ self.coeff.T + self.offset

    @classmethod
    def constant(cls, offset, params: int) -> "AffineMap":
        offset = np.asarray(offset, dtype=float)
        return cls(np.zeros((offset.shape[0], params)), offset)


def eval_affine(m: AffineMap, theta: np.ndarray) -> np.ndarray:
    """Evaluate ``m`` at a single parameter vector."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (m.params,):
        raise ValueError(
            f"theta has shape {theta.shape}, expected ({m.params},)"
        )
    return m.offset + m.coeff @ theta


@dataclass(frozen=True, eq=False)
class Polyhedron:
    """Halfspace intersection ``{theta : G @ theta <= g}``.

    Rows with a (numerically) zero normal are resolved at construction:
    a satisfiable zero row (g >= 0) is dropped, a violated one is kept
    and flags the polyhedron as trivially empty.
    """

    G: np.ndarray
    g: np.ndarray
    trivially_empty: bool = field(default=False, init=False)
    row_norms: np.ndarray = field(default=None, init=False, repr=False)

    def __post_init__(self):
        G = _frozen_matrix(self.G, "G")
        g = _frozen_vector(self.g, "g")
        if G.shape[0] != g.shape[0]:
            raise ValidationError(
                f"G has {G.shape[0]} rows but g has {g.shape[0]} entries"
            )
        norms = np.linalg.norm(G, axis=1) if G.shape[0] else np.zeros(0)
        zero = norms <= ZERO_ROW_TOL * (1.0 + np.abs(g))
        if zero.any():
            violated = zero & (g < -ZERO_ROW_TOL * (1.0 + np.abs(g)))
            keep = ~zero | violated
            G = _frozen_matrix(G[keep], "G")
            g = _frozen_vector(g[keep], "g")
            norms = norms[keep]
            if violated.any():
                object.__setattr__(self, "trivially_empty", True)
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "g", g)
        norms.flags.writeable = False
        object.__setattr__(self, "row_norms", norms)

    @property
    def rows(self) -> int:
        return self.G.shape[0]

    @property
    def dim(self) -> int:
        return self.G.shape[1]

    def normalized(self) -> tuple[np.ndarray, np.ndarray]:
        """Rows scaled to unit normals (zero rows were resolved already)."""
        if self.rows == 0:
            return self.G, self.g
        s = np.where(self.row_norms > 0.0, self.row_norms, 1.0)
        return self.G / s[:, None], self.g / s

    def contains(self, theta: np.ndarray, tol: float = 0.0) -> bool:
        return contains(self, theta, tol)

    @classmethod
    def box(cls, lower, upper) -> "Polyhedron":
        lower = np.asarray(lower, dtype=float)
        upper = np.asarray(upper, dtype=float)
        p = lower.shape[0]
        eye = np.eye(p)
        return cls(np.vstack([eye, -eye]), np.concatenate([upper, -lower]))


def contains(P: Polyhedron, theta: np.ndarray, tol: float = 0.0) -> bool:
    """Componentwise membership test ``G theta <= g + tol``."""
    if tol < 0.0:
        raise ValueError("tol must be nonnegative")
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (P.dim,):
        raise ValueError(f"theta has shape {theta.shape}, expected ({P.dim},)")
    if P.rows == 0:
        return True
    return bool(np.all(P.G @ theta <= P.g + tol))


class ActiveSet:
    """Canonical, hashable subset of constraint indices.

    Indices are stored sorted; two sets built from any permutation of the
    same indices compare and hash identically.  The bitmask (exact for any
    number of constraints thanks to Python integers) is the hash key, which
    keeps membership tests on large explored-sets cheap.
    """

    __slots__ = ("indices", "mask")

    def __init__(self, indices: Iterable[int] = ()):
        idx = tuple(sorted(int(i) for i in indices))
        if any(i < 0 for i in idx):
            raise ValidationError(f"negative constraint index in {idx}")
        if any(a == b for a, b in zip(idx, idx[1:])):
            raise ValidationError(f"duplicate constraint index in {idx}")
        object.__setattr__(self, "indices", idx)
        mask = 0
        for i in idx:
            mask |= 1 << i
        object.__setattr__(self, "mask", mask)

    def __setattr__(self, name, value):
        raise AttributeError("ActiveSet is immutable")

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def __contains__(self, i: int) -> bool:
        return bool(self.mask >> i & 1)

    def __eq__(self, other) -> bool:
        return isinstance(other, ActiveSet) and self.mask == other.mask

    def __hash__(self) -> int:
        return hash(self.mask)

    def __repr__(self) -> str:
        return f"ActiveSet({list(self.indices)!r})"

    @property
    def sort_key(self) -> tuple:
        return (len(self.indices), self.indices)

    def with_index(self, i: int) -> "ActiveSet":
        if i in self:
            raise ValidationError(f"index {i} already in {self!r}")
        return ActiveSet(self.indices + (i,))

    def without_index(self, i: int) -> "ActiveSet":
        if i not in self:
            raise ValidationError(f"index {i} not in {self!r}")
        return ActiveSet(j for j in self.indices if j != i)

    def complement(self, m: int) -> tuple[int, ...]:
        return tuple(i for i in range(m) if i not in self)

    def one_based(self) -> tuple[int, ...]:
        return tuple(i + 1 for i in self.indices)

    @classmethod
    def from_one_based(cls, indices: Iterable[int]) -> "ActiveSet":
        return cls(int(i) - 1 for i in indices)

    def array(self) -> np.ndarray:
        return np.fromiter(self.indices, dtype=np.intp, count=len(self.indices))


def adjacency(a: ActiveSet, b: ActiveSet) -> bool:
    """True iff the two sets differ by exactly one added/removed index."""
    return (a.mask ^ b.mask).bit_count() == 1


@dataclass(frozen=True, eq=False)
class MpQP:
    """Parametric QP: minimize 0.5 x'Hx + f(theta)'x  s.t.  A x <= b(theta).

    H must be symmetric positive definite; f and b are affine in theta,
    and theta ranges over the polyhedron ``theta0``.
    """

    H: np.ndarray
    f: AffineMap
    A: np.ndarray
    b: AffineMap
    theta0: Polyhedron

    def __post_init__(self):
        H = _frozen_matrix(self.H, "H")
        A = _frozen_matrix(self.A, "A")
        n = H.shape[0]
        if H.shape != (n, n):
            raise ValidationError(f"H must be square, got {H.shape}")
        skew = np.abs(H - H.T).max() if n else 0.0
        scale = np.abs(H).max() if n else 0.0
        if skew > SYMMETRY_TOL * (1.0 + scale):
            raise ValidationError(
                f"H is not symmetric: max |H - H'| = {skew:.3e}"
            )
        if skew > 0.0:
            H = _frozen_matrix((H + H.T) / 2.0, "H")
        try:
            np.linalg.cholesky(H)
        except np.linalg.LinAlgError:
            raise ValidationError("H is not positive definite") from None
        if A.shape[1] != n:
            raise ValidationError(
                f"A has {A.shape[1]} columns, expected n={n}"
            )
        if self.f.rows != n:
            raise ValidationError(f"f has {self.f.rows} rows, expected n={n}")
        if self.b.rows != A.shape[0]:
            raise ValidationError(
                f"b has {self.b.rows} rows, expected m={A.shape[0]}"
            )
        p = self.f.params
        if self.b.params != p:
            raise ValidationError(
                f"b depends on {self.b.params} parameters, f on {p}"
            )
        if self.theta0.dim != p:
            raise ValidationError(
                f"theta0 lives in {self.theta0.dim} dimensions, expected p={p}"
            )
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "A", A)

    @property
    def n(self) -> int:
        return self.H.shape[0]

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def p(self) -> int:
        return self.f.params


@dataclass(frozen=True, eq=False)
class MpLDP:
    """Parametric least-distance problem: min 0.5 ||u||^2 s.t. M u <= d(theta)."""

    M: np.ndarray
    d: AffineMap
    theta0: Polyhedron

    def __post_init__(self):
        M = _frozen_matrix(self.M, "M")
        if self.d.rows != M.shape[0]:
            raise ValidationError(
                f"d has {self.d.rows} rows, expected m={M.shape[0]}"
            )
        if self.theta0.dim != self.d.params:
            raise ValidationError(
                f"theta0 lives in {self.theta0.dim} dimensions, expected "
                f"p={self.d.params}"
            )
        object.__setattr__(self, "M", M)

    @property
    def n(self) -> int:
        return self.M.shape[1]

    @property
    def m(self) -> int:
        return self.M.shape[0]

    @property
    def p(self) -> int:
        return self.d.params
