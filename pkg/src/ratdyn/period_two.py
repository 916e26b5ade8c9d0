"""Prime period-two solutions and their local stability.

A two-cycle (phi, psi) of the recurrence satisfies phi + psi = 1 and
phi*psi = a/(b-1), i.e. the pair solves t^2 - t + a/(b-1) = 0.  Cycles are
fixed points of the second iterate of the planar map
T(u, v) = (v, (a+u)/(b v + u)); their stability is read off the Jacobian of
T at the two cycle points, multiplied along the loop.
"""

from __future__ import annotations

import logging
import math
import random
import warnings
from dataclasses import dataclass

from .coremap import (
    EPS_CYCLE,
    EPS_SINGULAR,
    OrbitState,
    Params,
    PeriodicCycle,
    ToleranceConfig,
    _cycle_distance,
    iterate,
    short_cycle_config,
)
from .equilibria import StabilityClass
from .errors import (
    DegenerateError,
    NoDistinctCycleError,
    OracleMismatchError,
    SingularError,
    SpuriousRootWarning,
)
from .numerics import Matrix2, eigen_moduli, mat_det, mat_mul, mat_trace, principal_sqrt, quadratic_roots, rel_error

log = logging.getLogger(__name__)

_VIETA_TOL = 1e-10
_FORM_TOL = 1e-10
_FD_STEP = 1e-6
_FD_TOL = 1e-6


@dataclass(frozen=True)
class TwoCycle:
    """A prime period-two pair; phi has the smaller real part."""

    phi: complex
    psi: complex


@dataclass(frozen=True)
class TwoCycleStability:
    """Trace/determinant of the second-iterate Jacobian and the verdict.

    ``jury_consistent`` records whether the coefficient test
    |chi| < 1 + |det| < 2 agreed with the directly computed eigenvalue
    moduli (the authority when they differ; the coefficient bound is exact
    only for real matrices).
    """

    chi: complex
    det: complex
    verdict: StabilityClass
    eigen_moduli: tuple[float, float]
    jury_consistent: bool


def map_jacobian(params: Params, u: complex, v: complex) -> Matrix2:
    """Jacobian of T(u, v) = (v, (a+u)/(b v+u)); top row is always (0, 1)."""
    den = params.beta * v + u
    if abs(den) < EPS_SINGULAR:
        raise SingularError(f"map Jacobian undefined: denominator {abs(den):.3e} at ({u!r}, {v!r})")
    den2 = den * den
    return [
        [0j, 1 + 0j],
        [(params.beta * v - params.alpha) / den2, -params.beta * (params.alpha + u) / den2],
    ]


def apply_map(params: Params, u: complex, v: complex) -> tuple[complex, complex]:
    den = params.beta * v + u
    if abs(den) < EPS_SINGULAR:
        raise SingularError(f"map undefined: denominator {abs(den):.3e} at ({u!r}, {v!r})")
    return v, (params.alpha + u) / den


def two_cycle(params: Params) -> TwoCycle:
    """Solve for the prime period-two pair.

    Roots come from the stable quadratic solver on t^2 - t + a/(b-1) = 0
    and are cross-checked against the explicit form
    0.5 -/+ 0.5*sqrt(a(4-4b)+(1-b)^2)/(b-1); the two routes must agree to
    1e-10.  A double root (discriminant magnitude < 1e-12) is rejected: the
    cycle would collapse to the value 0.5.
    """
    if abs(params.beta - 1) == 0.0:
        raise DegenerateError("beta = 1 leaves the cycle product a/(b-1) undefined")
    c = params.alpha / (params.beta - 1)
    disc = 1 - 4 * c
    if abs(disc) < 1e-12:
        raise NoDistinctCycleError(
            f"cycle discriminant magnitude {abs(disc):.3e} < 1e-12: double root at 0.5"
        )
    big, small = quadratic_roots(-1, c)
    # explicit closed form, as usually displayed
    radicand = params.alpha * (4 - 4 * params.beta) + (1 - params.beta) ** 2
    half_sq = 0.5 * principal_sqrt(radicand) / (params.beta - 1)
    explicit = (0.5 - half_sq, 0.5 + half_sq)
    err = min(
        max(rel_error(explicit[0], big), rel_error(explicit[1], small)),
        max(rel_error(explicit[0], small), rel_error(explicit[1], big)),
    )
    if err > _FORM_TOL:
        raise OracleMismatchError(
            f"explicit two-cycle form disagrees with quadratic roots by {err:.3e}"
        )
    phi, psi = (big, small) if (big.real, big.imag) <= (small.real, small.imag) else (small, big)
    if rel_error(phi + psi, 1) > _VIETA_TOL or rel_error(phi * psi, c) > _VIETA_TOL:
        raise OracleMismatchError("two-cycle roots violate Vieta bounds")
    for d in (params.beta * psi + phi, params.beta * phi + psi):
        if abs(d) < EPS_SINGULAR:
            warnings.warn(
                "two-cycle touches the singular set: a map denominator vanishes on it",
                SpuriousRootWarning,
                stacklevel=2,
            )
    return TwoCycle(phi=phi, psi=psi)


def _fd_t2_jacobian(params: Params, u: complex, v: complex, h: float) -> Matrix2:
    cols = []
    for du, dv in ((h, 0.0), (0.0, h)):
        up = apply_map(params, *apply_map(params, u + du, v + dv))
        um = apply_map(params, *apply_map(params, u - du, v - dv))
        cols.append(((up[0] - um[0]) / (2 * h), (up[1] - um[1]) / (2 * h)))
    return [[cols[0][0], cols[1][0]], [cols[0][1], cols[1][1]]]


def t2_jacobian(params: Params, cycle: TwoCycle) -> Matrix2:
    """Jacobian of the second iterate at (phi, psi), via the chain rule.

    T maps (phi, psi) to (psi, phi) on a cycle, so the product is
    J_T(psi, phi) . J_T(phi, psi).  The result is validated entrywise
    against central finite differences of T composed with itself
    (step 1e-6, relative tolerance 1e-6).
    """
    phi, psi = cycle.phi, cycle.psi
    chain = mat_mul(map_jacobian(params, psi, phi), map_jacobian(params, phi, psi))
    fd = _fd_t2_jacobian(params, phi, psi, _FD_STEP)
    worst = max(rel_error(fd[i][j], chain[i][j]) for i in range(2) for j in range(2))
    if worst > _FD_TOL:
        raise OracleMismatchError(
            f"second-iterate Jacobian mismatch: chain rule vs finite differences "
            f"deviate by {worst:.3e} (> {_FD_TOL:.0e})"
        )
    return chain


def classify_two_cycle(params: Params, cycle: TwoCycle) -> TwoCycleStability:
    """Stability verdict for the cycle from trace/determinant and eigenvalues.

    The coefficient condition |chi| < 1+|det| < 2 is evaluated first; the
    directly computed eigenvalue moduli always decide the verdict and any
    disagreement with the coefficient test is flagged via
    ``jury_consistent=False``.
    """
    jac = t2_jacobian(params, cycle)
    chi = mat_trace(jac)
    det = mat_det(jac)
    m1, m2 = eigen_moduli(jac)
    if abs(m1 - 1) < 1e-9 or abs(m2 - 1) < 1e-9:
        eig_verdict = StabilityClass.INCONCLUSIVE
    elif m1 < 1:
        eig_verdict = StabilityClass.LOCALLY_ASYMPTOTICALLY_STABLE
    elif m2 < 1:
        eig_verdict = StabilityClass.SADDLE
    else:
        eig_verdict = StabilityClass.UNSTABLE
    jury = abs(chi) < 1 + abs(det) < 2
    consistent = (not jury) or eig_verdict is StabilityClass.LOCALLY_ASYMPTOTICALLY_STABLE
    if not consistent:
        log.warning(
            "coefficient test says stable but eigenvalue moduli are %s at a=%r b=%r",
            (m1, m2),
            params.alpha,
            params.beta,
        )
    return TwoCycleStability(
        chi=chi,
        det=det,
        verdict=eig_verdict,
        eigen_moduli=(m1, m2),
        jury_consistent=consistent,
    )


def cycle_step_residual(params: Params, cycle: TwoCycle) -> float:
    """max(|step(phi,psi)-phi|, |step(psi,phi)-psi|); ~round-off for a
    genuine cycle."""
    _, a = apply_map(params, cycle.phi, cycle.psi)
    _, b = apply_map(params, cycle.psi, cycle.phi)
    return max(abs(a - cycle.phi), abs(b - cycle.psi))


def verify_cycle_dynamically(params: Params, cycle: TwoCycle, cfg: ToleranceConfig) -> bool:
    """Close the loop with the iterator.

    From the exact pair the orbit must classify as PeriodicCycle(2) matching
    {phi, psi}; the replay is kept short so floating-point growth on an
    unstable cycle cannot mask genuine periodicity.  When the verdict is
    stable, a start perturbed by 1e-3 in a fixed pseudo-random direction
    must relax back onto the cycle within the caller's full budget.
    """
    pair = (cycle.phi, cycle.psi)
    orbit = iterate(params, OrbitState(z_prev=cycle.phi, z_curr=cycle.psi), short_cycle_config(cfg, 2))
    out = orbit.outcome
    if not (isinstance(out, PeriodicCycle) and out.period == 2):
        log.info("exact-start replay did not classify as a 2-cycle: %r", out)
        return False
    if _cycle_distance(out.cycle, pair) > cfg.eps_cycle:
        log.info("exact-start replay drifted off the cycle by %.3e", _cycle_distance(out.cycle, pair))
        return False
    verdict = classify_two_cycle(params, cycle).verdict
    if verdict is StabilityClass.LOCALLY_ASYMPTOTICALLY_STABLE:
        angle = random.Random(0).uniform(0, 2 * math.pi)
        delta = 1e-3 * complex(math.cos(angle), math.sin(angle))
        orbit2 = iterate(params, OrbitState(z_prev=cycle.phi + delta, z_curr=cycle.psi), cfg)
        out2 = orbit2.outcome
        if not (isinstance(out2, PeriodicCycle) and out2.period == 2):
            log.info("perturbed start did not return to a 2-cycle: %r", out2)
            return False
        if _cycle_distance(out2.cycle, pair) > cfg.eps_cycle:
            log.info("perturbed start settled on a different 2-cycle")
            return False
    return True
