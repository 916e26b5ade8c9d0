"""Exception hierarchy and warnings shared by all ratdyn modules."""

from __future__ import annotations


class RatdynError(Exception):
    """Base class for all errors raised by this package."""


class SingularError(RatdynError):
    """The map denominator b*z_curr + z_prev is (numerically) zero.

    Carries the offending step index when raised during iteration.
    """

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


class DegenerateError(RatdynError):
    """Parameters make a closed form collapse (b = -1, a = 0, b = 1, ...).

    For b = -1 the equilibrium quadratic degenerates to a linear equation;
    its single root is attached as ``linear_root``.
    """

    def __init__(self, message: str, linear_root: complex | None = None):
        super().__init__(message)
        self.linear_root = linear_root


class NoDistinctCycleError(RatdynError):
    """The two-cycle quadratic has a (numerical) double root at 0.5."""


class InsufficientDataError(RatdynError):
    """A trajectory tail is too short for the requested period scan."""


class OrbitDiedError(RatdynError):
    """An orbit hit a singularity or escaped before an estimate finished."""

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


class NonFiniteError(RatdynError):
    """A value that must stay finite overflowed or became NaN."""


class NotConvergedError(RatdynError):
    """A diagnostic required a converged estimate and got none."""


class OracleMismatchError(RatdynError):
    """Two independent computations of the same quantity disagree.

    Raised when an analytic result fails validation against its
    finite-difference or closed-form counterpart; this signals a bug or a
    near-singular evaluation point, never a routine condition.
    """


class ConfigError(RatdynError):
    """A run configuration document is malformed."""


class SpuriousRootWarning(UserWarning):
    """A root of the equilibrium/cycle polynomial is not in the map's domain.

    Example: a = 0 makes z = 0 solve the equilibrium quadratic while the
    original fraction is undefined there.
    """
