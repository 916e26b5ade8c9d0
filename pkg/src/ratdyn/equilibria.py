"""Equilibria of the recurrence, their linearization, and local stability.

The fixed points of z -> (a + z) / (b*z + z) are the roots of
(1+b) z^2 - z - a = 0, written throughout as (1 -/+ sqrt(1+4a+4ab)) / (2(1+b))
with the principal square root; the ``minus`` branch carries the -sqrt root.

Two classification routes exist on purpose.  ``classify_by_lemma`` applies
the textbook coefficient bounds |r| < |1-s| < 2 (stability) and |r| > |1-s|
(saddle) to the normal form x^2 - r x - s = 0.  Those bounds are only valid
for real coefficients; over complex ones they are a heuristic and do fail.
``classify_roots`` solves the quadratic directly and is the authority used
in reports; the lemma route is kept as the independently checkable cheap
test.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Optional

from .coremap import EPS_SINGULAR, Params
from .errors import (
    DegenerateError,
    OracleMismatchError,
    SingularError,
    SpuriousRootWarning,
)
from .numerics import principal_sqrt, quadratic_roots, rel_error

_UNIT_BAND = 1e-9  # root modulus within this of 1 counts as boundary
_FORM_TOL = 1e-8  # closed-form vs derivative coefficient agreement


class Branch(enum.Enum):
    MINUS = "minus"
    PLUS = "plus"


class StabilityClass(enum.Enum):
    LOCALLY_ASYMPTOTICALLY_STABLE = "locally-asymptotically-stable"
    SADDLE = "saddle"
    UNSTABLE = "unstable"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class CharQuadratic:
    """Characteristic quadratic of a linearized equation, in both forms.

    Normal form x^2 - r x - s = 0 and raw form x^2 + c1 x + c0 = 0 with
    r = -c1, s = -c0 (exact by construction).  ``form_discrepancy`` records
    the worst relative deviation between the derivative-based coefficients
    and the closed-form ones, when the closed form applies.
    """

    r: complex
    s: complex
    c1: complex
    c0: complex
    form_discrepancy: Optional[float] = None


@dataclass(frozen=True)
class EquilibriumReport:
    value: complex
    branch: Branch
    char_poly: Optional[CharQuadratic]
    root_moduli: Optional[tuple[float, float]]
    stability: StabilityClass
    criterion_value: float  # |1 + (1+2a +/- sqrt(D)) / (2a(1+b))| for this branch
    residual: float  # |f(z, z) - z|, inf when the denominator vanishes
    spurious: bool = False


@dataclass(frozen=True)
class SpecialCaseReport:
    """Equal-parameter (a = b) analysis: reports plus the classic condition.

    ``condition_lower``/``condition_upper`` are |1 + 1/(1+a)| and
    |1 + 1/(a+a^2)|; the pair is reported verbatim for reference although
    the stability verdicts inside the reports come from the actual
    linearization.
    """

    at_one: EquilibriumReport
    companion: EquilibriumReport
    condition_lower: float
    condition_upper: float
    condition_holds: bool


# ---------------------------------------------------------------------------


def _fixed_point_residual(params: Params, z: complex) -> tuple[float, bool]:
    den = params.beta * z + z
    if abs(den) < EPS_SINGULAR:
        return math.inf, True
    return abs((params.alpha + z) / den - z), False


def discriminant(params: Params) -> complex:
    return 1 + 4 * params.alpha + 4 * params.alpha * params.beta


def equilibrium_values(params: Params) -> tuple[complex, complex]:
    """Both fixed points, (minus-branch, plus-branch), stably computed.

    The quadratic is solved cancellation-free and the results are tagged by
    comparing against the +/- sqrt closed forms.  Raises DegenerateError
    (carrying the single linear root -a) when b = -1.
    """
    one_plus_beta = 1 + params.beta
    if abs(one_plus_beta) == 0.0:
        raise DegenerateError(
            "beta = -1 degenerates the equilibrium quadratic to -z - a = 0",
            linear_root=-params.alpha,
        )
    sq = principal_sqrt(discriminant(params))
    big, small = quadratic_roots(-1 / one_plus_beta, -params.alpha / one_plus_beta)
    # larger root pairs with the sign giving |1 + sign*sq| maximal
    if abs(1 + sq) >= abs(1 - sq):
        z_plus, z_minus = big, small
    else:
        z_plus, z_minus = small, big
    return z_minus, z_plus


def linearize_at(params: Params, eq: complex) -> CharQuadratic:
    """Characteristic quadratic of the linearization at a fixed point.

    The coefficients come from the partial derivatives of
    f(z_n, z_prev) = (a + z_prev) / (b z_n + z_prev) at (eq, eq); when
    a(1+b) != 0 they are also computed from the +/- sqrt closed forms and
    the two routes must agree to 1e-8 relative (the worst deviation is kept
    in ``form_discrepancy``).  The derivative-based values are returned.
    """
    den = params.beta * eq + eq
    a_times = params.alpha * (1 + params.beta)
    if abs(den) < EPS_SINGULAR:
        if abs(a_times) == 0.0:
            raise DegenerateError("a(1+b) = 0 and the denominator vanishes at eq")
        raise SingularError(f"denominator vanishes at equilibrium {eq!r}")
    p = -params.beta * (params.alpha + eq) / den**2  # df/dz_n
    q = (params.beta * eq - params.alpha) / den**2  # df/dz_prev
    discrepancy: Optional[float] = None
    if abs(a_times) > 0.0:
        sq = principal_sqrt(discriminant(params))
        c1_closed = params.beta / (1 + params.beta)
        c0_candidates = [
            (1 + 2 * params.alpha + sign * sq) / (2 * a_times) for sign in (+1, -1)
        ]
        errs = [rel_error(c, -q) for c in c0_candidates]
        discrepancy = max(min(errs), rel_error(c1_closed, -p))
        if discrepancy > _FORM_TOL:
            raise OracleMismatchError(
                f"closed-form linearization disagrees with derivatives at {eq!r} "
                f"(relative deviation {discrepancy:.3e}); is eq a fixed point?"
            )
    return CharQuadratic(r=p, s=q, c1=-p, c0=-q, form_discrepancy=discrepancy)


def classify_by_lemma(q: CharQuadratic) -> StabilityClass:
    """Coefficient test on x^2 - r x - s = 0.

    |r| < |1-s| < 2 reports stable and |r| > |1-s| reports saddle; anything
    else is inconclusive.  Exact only for real r, s; kept as the cheap
    cross-check against classify_roots.
    """
    mr, m1s = abs(q.r), abs(1 - q.s)
    if mr < m1s < 2:
        return StabilityClass.LOCALLY_ASYMPTOTICALLY_STABLE
    if mr > m1s:
        return StabilityClass.SADDLE
    return StabilityClass.INCONCLUSIVE


def classify_roots(q: CharQuadratic) -> tuple[StabilityClass, tuple[float, float]]:
    """Classify by solving the quadratic directly; moduli descending."""
    big, small = quadratic_roots(-q.r, -q.s)
    m1, m2 = abs(big), abs(small)
    if m1 < m2:
        m1, m2 = m2, m1
    if abs(m1 - 1) < _UNIT_BAND or abs(m2 - 1) < _UNIT_BAND:
        return StabilityClass.INCONCLUSIVE, (m1, m2)
    if m1 < 1:
        return StabilityClass.LOCALLY_ASYMPTOTICALLY_STABLE, (m1, m2)
    if m2 < 1:
        return StabilityClass.SADDLE, (m1, m2)
    return StabilityClass.UNSTABLE, (m1, m2)


def _expr_sign(branch: Branch) -> int:
    # the minus-branch equilibrium carries the +sqrt margin expression
    return +1 if branch is Branch.MINUS else -1


def stability_margin(params: Params, branch: Branch) -> float:
    """|1 + (1 + 2a +/- sqrt(1+4a+4ab)) / (2a + 2ab)| for the branch.

    Values below 2 certify local asymptotic stability of that branch's
    equilibrium in the classic sufficient test.  Note the square-root sign
    inside the expression is opposite to the equilibrium branch sign.
    """
    denom = 2 * params.alpha * (1 + params.beta)
    if abs(denom) == 0.0:
        raise DegenerateError("a(1+b) = 0 leaves the stability expression undefined")
    sq = principal_sqrt(discriminant(params))
    return abs(1 + (1 + 2 * params.alpha + _expr_sign(branch) * sq) / denom)


def saddle_margin(params: Params, branch: Branch) -> float:
    """|b/(1+b)| minus the branch stability expression; > 0 flags a saddle
    by the classic coefficient test."""
    if abs(1 + params.beta) == 0.0:
        raise DegenerateError("beta = -1 leaves b/(1+b) undefined")
    return abs(params.beta / (1 + params.beta)) - stability_margin(params, branch)


def _report_for(params: Params, value: complex, branch: Branch) -> EquilibriumReport:
    residual, spurious = _fixed_point_residual(params, value)
    if spurious:
        warnings.warn(
            f"equilibrium {value!r} (branch {branch.value}) annihilates the map "
            "denominator; the root is outside the map's domain",
            SpuriousRootWarning,
            stacklevel=3,
        )
        return EquilibriumReport(
            value=value,
            branch=branch,
            char_poly=None,
            root_moduli=None,
            stability=StabilityClass.INCONCLUSIVE,
            criterion_value=math.nan,
            residual=residual,
            spurious=True,
        )
    char = linearize_at(params, value)
    stability, moduli = classify_roots(char)
    try:
        criterion = stability_margin(params, branch)
    except DegenerateError:
        criterion = math.nan
    return EquilibriumReport(
        value=value,
        branch=branch,
        char_poly=char,
        root_moduli=moduli,
        stability=stability,
        criterion_value=criterion,
        residual=residual,
        spurious=spurious,
    )


def equilibria(params: Params) -> tuple[EquilibriumReport, EquilibriumReport]:
    """Full reports for both equilibria, minus branch first."""
    z_minus, z_plus = equilibrium_values(params)
    return (
        _report_for(params, z_minus, Branch.MINUS),
        _report_for(params, z_plus, Branch.PLUS),
    )


def special_case_alpha_eq_beta(alpha: complex) -> SpecialCaseReport:
    """Equal-parameter analysis (a = b).

    The fixed points are 1 and -a/(1+a); 1 + 4a + 4a^2 = (1+2a)^2 makes the
    general closed form exact here.  The widely quoted companion value
    a/(1+a) is the sign slip of that root: it does not satisfy the fixed
    point equation (f(a/(1+a)) = (2+a)/(1+a) there), so this routine keeps
    the true root.  The classic condition pair |1 + 1/(1+a)| and
    |1 + 1/(a+a^2)| is still evaluated and reported for reference.
    """
    if abs(alpha) == 0.0 or abs(1 + alpha) == 0.0:
        raise DegenerateError("special case needs a not in {0, -1}")
    params = Params(alpha=alpha, beta=alpha)
    rep_a, rep_b = equilibria(params)
    if abs(rep_a.value - 1) <= abs(rep_b.value - 1):
        at_one, companion = rep_a, rep_b
    else:
        at_one, companion = rep_b, rep_a
    if abs(at_one.value - 1) > 1e-9:
        raise OracleMismatchError(
            f"equal-parameter equilibria did not contain 1: got {at_one.value!r}"
        )
    lower = abs(1 + 1 / (1 + alpha))
    upper = abs(1 + 1 / (alpha + alpha * alpha))
    return SpecialCaseReport(
        at_one=at_one,
        companion=companion,
        condition_lower=lower,
        condition_upper=upper,
        condition_holds=lower < upper < 2,
    )
