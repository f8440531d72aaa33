"""Bounding boxes of parameter sets and 2-d partition rasters.

The bounding box is found with the same feasibility machinery used
everywhere else: a recession-direction probe decides unboundedness, then
per-coordinate bisection brackets each extreme.  The partition plot is a
raster: every grid point is located in the explicit solution and colored
by its owning record; uncovered points get the background color, which is
recorded (together with the record colors) in a sidecar legend file.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import InfeasibleProblem, Unbounded, WrongDimension
from .feasibility import check_nonempty
from .model import Polyhedron
from .solution import ExplicitSolution, locate_many

BACKGROUND = "#eeeeee"


def _direction_probe(P: Polyhedron, direction: np.ndarray) -> bool:
    """True iff P recedes in ``direction`` (so sup direction'theta = inf)."""
    G = np.vstack([P.G, -direction[None, :]])
    g = np.concatenate([np.zeros(P.rows), [-1.0]])
    return check_nonempty(Polyhedron(G, g)).is_nonempty


def _extreme(P: Polyhedron, direction: np.ndarray, start: float,
             rtol: float) -> float:
    """sup of direction'theta over P, bracketed by bisection."""

    def reaches(t: float) -> bool:
        G = np.vstack([P.G, -direction[None, :]])
        g = np.concatenate([P.g, [-t]])
        return check_nonempty(Polyhedron(G, g)).is_nonempty

    lo = start
    step = 1.0 + abs(start)
    hi = lo + step
    for _ in range(80):
        if not reaches(hi):
            break
        lo = hi
        step *= 2.0
        hi = lo + step
    else:
        raise Unbounded("no finite extreme found despite recession check")
    while hi - lo > rtol * (1.0 + abs(hi) + abs(lo)):
        mid = 0.5 * (lo + hi)
        if reaches(mid):
            lo = mid
        else:
            hi = mid
    return lo


def bounding_box(P: Polyhedron, rtol: float = 1e-6
                 ) -> tuple[np.ndarray, np.ndarray]:
    """Tight per-coordinate bounds of a nonempty, bounded polyhedron."""
    feas = check_nonempty(P)
    if not feas.is_nonempty:
        raise InfeasibleProblem("the polyhedron is empty")
    witness = feas.witness
    lo = np.zeros(P.dim)
    hi = np.zeros(P.dim)
    for i in range(P.dim):
        for sign in (1.0, -1.0):
            e = np.zeros(P.dim)
            e[i] = sign
            if _direction_probe(P, e):
                raise Unbounded(
                    f"parameter set is unbounded in coordinate {i + 1} "
                    f"({'+' if sign > 0 else '-'})"
                )
            ext = _extreme(P, e, sign * witness[i], rtol)
            if sign > 0:
                hi[i] = ext
            else:
                lo[i] = -ext
    return lo, hi


def plot_partition(sol: ExplicitSolution, out_path, grid: int = 200) -> dict:
    """Rasterize a 2-parameter partition to an image plus a legend sidecar.

    Returns a small summary dict (cells colored, legend rows, paths).
    """
    if sol.p != 2:
        raise WrongDimension(
            f"partition plots need p=2 parameters, solution has p={sol.p}"
        )
    if not sol.records:
        raise InfeasibleProblem("solution contains no critical regions")
    lo, hi = bounding_box(sol.theta0)
    margin = 0.02 * (hi - lo + 1e-12)
    lo, hi = lo - margin, hi + margin
    xs = np.linspace(lo[0], hi[0], grid)
    ys = np.linspace(lo[1], hi[1], grid)
    XX, YY = np.meshgrid(xs, ys)
    pts = np.column_stack([XX.ravel(), YY.ravel()])
    owner = locate_many(sol, pts).reshape(grid, grid)

    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib import colormaps
    from matplotlib.colors import ListedColormap, to_hex

    cmap20 = colormaps["tab20"]
    colors = [to_hex(cmap20(i % 20)) for i in range(len(sol.records))]
    cmap = ListedColormap(colors)
    cmap.set_bad(BACKGROUND)
    data = np.ma.masked_where(owner < 0, owner)

    fig, ax = plt.subplots(figsize=(6, 5))
    ax.imshow(data, origin="lower", extent=(lo[0], hi[0], lo[1], hi[1]),
              aspect="auto", cmap=cmap, vmin=0,
              vmax=max(len(colors) - 1, 1), interpolation="nearest")
    ax.set_xlabel("theta_1")
    ax.set_ylabel("theta_2")
    ax.set_title(f"{len(sol.records)} critical regions")
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)

    legend_path = str(out_path) + ".legend.json"
    legend = {
        "background": BACKGROUND,
        "entries": [
            {"record": i, "color": colors[i],
             "active_set": list(rec.active_set.one_based())}
            for i, rec in enumerate(sol.records)
        ],
    }
    Path(legend_path).write_text(json.dumps(legend, indent=1) + "\n")
    return {
        "image": str(out_path),
        "legend": legend_path,
        "cells_colored": int((owner >= 0).sum()),
        "legend_rows": len(legend["entries"]),
    }
