"""Exception types shared across the library.

The CLI maps these onto distinct exit codes, so keep the hierarchy flat and
stable.
"""


class MinkError(Exception):
    """Base class for library errors."""


class DegenerateConstraintError(MinkError):
    """Constraint with a zero normal vector (0, 0)."""


class InfeasibleError(MinkError):
    """The constraint system admits no feasible pair."""


class RankRangeError(MinkError):
    """Requested rank k lies outside [1, feasible count]."""


class NoFeasibleValueError(MinkError):
    """A finding query has no feasible value in the requested region."""


class InputError(MinkError):
    """Malformed problem file or sequence file."""


class InternalInvariantError(MinkError):
    """A debug cross-check between two independent computations disagreed."""
