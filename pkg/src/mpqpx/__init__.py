"""Explicit solutions of multi-parametric quadratic programs.

The pipeline: transform the QP to a least-distance problem by a Cholesky
change of variables, enumerate the optimal active sets by exploring their
single-index adjacency graph (feasibility of each candidate region decided
by a small least-distance solve, never any polytope geometry), and map the
per-region affine laws back to the original variables.
"""

from .errors import (BadSeed, CholeskyFailure, GramSingular,
                     InfeasibleProblem, IterationLimit, MpqpError,
                     NoStartFound, OutsideSolution, ParseError,
                     SequenceFailure, TooLarge, Unbounded, ValidationError,
                     WrongDimension)
from .explorer import (ExplorationState, ExploreCounters, explore,
                       initial_active_set, valid_sequence)
from .feasibility import FeasibilityResult, FeasStatus, check_nonempty
from .generators import generate
from .model import (ActiveSet, AffineMap, MpLDP, MpQP, Polyhedron,
                    adjacency, contains, eval_affine)
from .oracle import (PointwiseSolution, PointwiseStatus, brute_force,
                     kkt_region_nonempty, pointwise_solve)
from .problem_io import load_problem, problem_digest, save_problem
from .regions import (CriticalRegionRecord, build_region, dual_map, licq,
                      primal_map, slack_map)
from .solution import (ExplicitSolution, SolutionRecord, SolveOptions,
                       compute_explicit_solution, evaluate, load_solution,
                       locate_many, save_solution)
from .transform import RecoveryData, recover_point, recover_solution, to_ldp

__version__ = "0.1.0"

__all__ = [
    "ActiveSet", "AffineMap", "BadSeed", "CholeskyFailure",
    "CriticalRegionRecord", "ExplicitSolution", "ExplorationState",
    "ExploreCounters", "FeasStatus", "FeasibilityResult", "GramSingular",
    "InfeasibleProblem", "IterationLimit", "MpLDP", "MpQP", "MpqpError",
    "NoStartFound", "OutsideSolution", "ParseError", "PointwiseSolution",
    "PointwiseStatus", "Polyhedron", "RecoveryData", "SequenceFailure",
    "SolutionRecord", "SolveOptions", "TooLarge", "Unbounded",
    "ValidationError", "WrongDimension", "adjacency", "brute_force",
    "build_region", "check_nonempty", "compute_explicit_solution",
    "contains", "dual_map", "eval_affine", "evaluate", "explore",
    "generate", "initial_active_set", "kkt_region_nonempty", "licq",
    "load_problem", "load_solution", "locate_many", "pointwise_solve",
    "primal_map", "problem_digest", "recover_point", "recover_solution",
    "save_problem", "save_solution", "slack_map", "to_ldp",
    "valid_sequence",
]
