"""Problem file format: one JSON document mirroring the QP data.

Fields: n, m, p, H (row-major), f_coeff, f_offset, A, b_coeff, b_offset,
theta0_G, theta0_g, all nested numeric arrays, so a file can be audited
against the mathematical problem statement symbol by symbol.  Files are
written in a canonical form (sorted keys, fixed indentation, shortest
round-trip decimals), which makes identical problems byte-identical.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .errors import ParseError, ValidationError
from .model import AffineMap, MpQP, Polyhedron

_FIELDS = ("n", "m", "p", "H", "f_coeff", "f_offset", "A",
           "b_coeff", "b_offset", "theta0_G", "theta0_g")


def canonical_dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def _as_array(doc: dict, name: str, shape: tuple[int, ...]) -> np.ndarray:
    if name not in doc:
        raise ParseError(f"missing field '{name}'")
    try:
        arr = np.array(doc[name], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"field '{name}' is not a numeric array: {exc}") \
            from None
    if arr.shape != shape:
        raise ValidationError(
            f"field '{name}' has shape {arr.shape}, expected {shape}"
        )
    return arr


def _as_int(doc: dict, name: str) -> int:
    if name not in doc:
        raise ParseError(f"missing field '{name}'")
    value = doc[name]
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ParseError(f"field '{name}' must be a positive integer")
    return value


def problem_from_dict(doc: dict) -> MpQP:
    if not isinstance(doc, dict):
        raise ParseError("problem document must be a JSON object")
    n = _as_int(doc, "n")
    m = _as_int(doc, "m")
    p = _as_int(doc, "p")
    H = _as_array(doc, "H", (n, n))
    f = AffineMap(_as_array(doc, "f_coeff", (n, p)),
                  _as_array(doc, "f_offset", (n,)))
    A = _as_array(doc, "A", (m, n))
    b = AffineMap(_as_array(doc, "b_coeff", (m, p)),
                  _as_array(doc, "b_offset", (m,)))
    if "theta0_G" not in doc:
        raise ParseError("missing field 'theta0_G'")
    try:
        G0 = np.array(doc["theta0_G"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"field 'theta0_G' is not a numeric array: {exc}") \
            from None
    if G0.ndim != 2 or G0.shape[1] != p:
        raise ValidationError(
            f"field 'theta0_G' has shape {G0.shape}, expected (*, {p})"
        )
    g0 = _as_array(doc, "theta0_g", (G0.shape[0],))
    theta0 = Polyhedron(G0, g0)
    return MpQP(H, f, A, b, theta0)


def problem_to_dict(qp: MpQP) -> dict:
    return {
        "n": qp.n,
        "m": qp.m,
        "p": qp.p,
        "H": qp.H.tolist(),
        "f_coeff": qp.f.coeff.tolist(),
        "f_offset": qp.f.offset.tolist(),
        "A": qp.A.tolist(),
        "b_coeff": qp.b.coeff.tolist(),
        "b_offset": qp.b.offset.tolist(),
        "theta0_G": qp.theta0.G.tolist(),
        "theta0_g": qp.theta0.g.tolist(),
    }


def load_problem(path) -> MpQP:
    """Read and validate a problem file."""
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from None
    return problem_from_dict(doc)


def save_problem(doc: dict | MpQP, path) -> None:
    if isinstance(doc, MpQP):
        doc = problem_to_dict(doc)
    Path(path).write_text(canonical_dumps(doc))


def problem_digest(qp: MpQP) -> str:
    """Content digest of the canonical problem serialization."""
    text = canonical_dumps(problem_to_dict(qp))
    return "sha256:" + hashlib.sha256(text.encode()).hexdigest()
