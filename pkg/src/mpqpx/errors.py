"""Exception types shared across the package.

The CLI maps these onto exit codes: 1 for input/validation problems,
2 for numerical failures, 3 for infeasible/outside-partition outcomes.
"""


class MpqpError(Exception):
    """Base class for all package errors."""


# -- input / validation (exit code 1) ---------------------------------------

class ParseError(MpqpError):
    """A problem or solution file could not be parsed."""


class ValidationError(MpqpError):
    """Problem data is structurally invalid (dimensions, definiteness)."""


class WrongDimension(MpqpError):
    """An operation requires a specific parameter dimension."""


class Unbounded(MpqpError):
    """The parameter set is unbounded where a bounded one is required."""


class TooLarge(MpqpError):
    """Exhaustive enumeration refused: too many constraints."""


# -- numerical failures (exit code 2) ----------------------------------------

class CholeskyFailure(MpqpError):
    """The Hessian is not (numerically) positive definite."""


class GramSingular(MpqpError):
    """Gram matrix factorization failed for a set that passed the rank check."""


class IterationLimit(MpqpError):
    """An iterative solve hit its iteration cap or produced an
    uninterpretable result; signals numerical distress."""


class NoStartFound(MpqpError):
    """No valid initial active set found after all fallback strategies."""


class BadSeed(MpqpError):
    """The initial active set handed to the explorer is not usable."""


class SequenceFailure(MpqpError):
    """No valid step exists while building a combinatorial sequence."""


# -- infeasible / outside (exit code 3) --------------------------------------

class InfeasibleProblem(MpqpError):
    """The parameter set is empty or the problem is infeasible everywhere."""


class OutsideSolution(MpqpError):
    """A query point is not covered by any critical region."""
