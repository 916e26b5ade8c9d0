"""The recurrence z[n+1] = (a + z[n-1]) / (b*z[n] + z[n-1]) and its orbits.

This module defines the parameter/state containers, the single-step map,
the orbit iterator with its outcome classification (singular, unbounded,
convergent, periodic, undecided), cycle detection on trajectory tails, and
the refinement of raw outcomes against known equilibria and two-cycles.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Sequence, Union

from .errors import InsufficientDataError, SingularError
from .numerics import require_finite

# Defaults chosen as conservative double-precision tolerances; every value
# can be overridden through ToleranceConfig.
EPS_SINGULAR = 1e-12
RADIUS_UNBOUNDED = 1e8
EPS_CONVERGE = 1e-9
CONVERGE_WINDOW = 20
MAX_PERIOD = 50
EPS_CYCLE = 1e-6
MAX_ITERS = 20000
TRANSIENT_DISCARD = 1000


@dataclass(frozen=True)
class Params:
    """The complex parameter pair (alpha, beta) of one recurrence instance.

    Values are stored exactly as given; degenerate choices (beta = -1,
    alpha = 0, beta = 0, beta = 1) are legal here and handled by each
    consumer's own error contract.
    """

    alpha: complex
    beta: complex

    def __post_init__(self):
        require_finite(complex(self.alpha), "alpha")
        require_finite(complex(self.beta), "beta")


@dataclass(frozen=True)
class OrbitState:
    """A pair (z[n-1], z[n]) plus its step index."""

    z_prev: complex
    z_curr: complex
    n: int = 0

    def __post_init__(self):
        require_finite(complex(self.z_prev), "z_prev")
        require_finite(complex(self.z_curr), "z_curr")
        if self.n < 0:
            raise ValueError("step index must be >= 0")


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical knobs for orbit iteration and outcome detection."""

    eps_singular: float = EPS_SINGULAR
    radius_unbounded: float = RADIUS_UNBOUNDED
    eps_converge: float = EPS_CONVERGE
    converge_window: int = CONVERGE_WINDOW
    max_period: int = MAX_PERIOD
    eps_cycle: float = EPS_CYCLE
    max_iters: int = MAX_ITERS
    transient_discard: int = TRANSIENT_DISCARD

    def __post_init__(self):
        if self.eps_singular <= 0 or self.radius_unbounded <= 0:
            raise ValueError("eps_singular and radius_unbounded must be > 0")
        if self.eps_converge <= 0 or self.eps_cycle <= 0:
            raise ValueError("eps_converge and eps_cycle must be > 0")
        if self.converge_window < 2 or self.max_period < 2:
            raise ValueError("converge_window and max_period must be >= 2")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not 0 <= self.transient_discard < self.max_iters:
            raise ValueError("need 0 <= transient_discard < max_iters")
        if self.converge_window > self.max_iters:
            raise ValueError("converge_window must not exceed max_iters")


# ---------------------------------------------------------------------------
# Orbit outcomes (tagged union)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConvergedTo:
    kind = "converged"
    limit: complex


@dataclass(frozen=True)
class PeriodicCycle:
    kind = "periodic"
    period: int
    cycle: tuple[complex, ...]


@dataclass(frozen=True)
class Singular:
    kind = "singular"
    step: int


@dataclass(frozen=True)
class Unbounded:
    kind = "unbounded"
    step: int


@dataclass(frozen=True)
class Undecided:
    kind = "undecided"


OrbitOutcome = Union[ConvergedTo, PeriodicCycle, Singular, Unbounded, Undecided]


@dataclass(frozen=True)
class Orbit:
    """A simulated trajectory: points z[1]..z[N] plus its classification."""

    params: Params
    initial: OrbitState
    points: tuple[complex, ...]
    outcome: OrbitOutcome
    iterations_used: int


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def step(params: Params, state: OrbitState, eps_singular: float = EPS_SINGULAR) -> complex:
    """One application of the map: (a + z_prev) / (b*z_curr + z_prev).

    Raises SingularError when the denominator magnitude falls below
    ``eps_singular`` (the mechanism behind unbounded solutions).
    """
    den = params.beta * state.z_curr + state.z_prev
    if abs(den) < eps_singular:
        raise SingularError(
            f"denominator magnitude {abs(den):.3e} below {eps_singular:.3e} at step {state.n}",
            step=state.n,
        )
    return (params.alpha + state.z_prev) / den


def advance(params: Params, state: OrbitState, eps_singular: float = EPS_SINGULAR) -> OrbitState:
    """step() packaged as state -> state, with n incremented by one."""
    z_next = step(params, state, eps_singular)
    return OrbitState(z_prev=state.z_curr, z_curr=z_next, n=state.n + 1)


def detect_cycle(
    tail: Sequence[complex], max_period: int, eps_cycle: float
) -> Optional[tuple[int, tuple[complex, ...]]]:
    """Find the smallest period p in 2..max_period matching the tail.

    Requires len(tail) >= 2*max_period (InsufficientDataError otherwise) and
    compares over the final 2*max_period entries.  A tail within eps_cycle
    of a constant sequence is convergence territory, not a cycle, and
    returns None; scanning p in ascending order keeps any reported period
    prime (a multiple of a true period never wins).
    """
    if len(tail) < 2 * max_period:
        raise InsufficientDataError(
            f"need at least {2 * max_period} points to scan periods up to {max_period}, "
            f"got {len(tail)}"
        )
    window = list(tail[-2 * max_period:])
    if all(abs(window[k + 1] - window[k]) < eps_cycle for k in range(len(window) - 1)):
        return None  # period-1 to within eps: a (near-)converged tail
    for p in range(2, max_period + 1):
        if all(abs(window[k + p] - window[k]) < eps_cycle for k in range(len(window) - p)):
            return p, tuple(window[-p:])
    return None


def iterate(params: Params, initial: OrbitState, cfg: ToleranceConfig) -> Orbit:
    """Run the recurrence for up to cfg.max_iters steps and classify.

    Outcome rules fire in fixed priority order: Singular, then Unbounded
    (|z| > radius), then ConvergedTo (the last converge_window points all
    within eps_converge of the newest one; limit = final point), and only
    after the full run PeriodicCycle via detect_cycle on the post-transient
    tail; otherwise Undecided.  All failure modes are outcomes, not errors.
    """
    points: list[complex] = []
    zp, zc = complex(initial.z_prev), complex(initial.z_curr)
    w = cfg.converge_window
    outcome: OrbitOutcome | None = None

    for k in range(cfg.max_iters):
        den = params.beta * zc + zp
        if abs(den) < cfg.eps_singular:
            outcome = Singular(step=initial.n + k)
            break
        z = (params.alpha + zp) / den
        points.append(z)
        if abs(z) > cfg.radius_unbounded:
            outcome = Unbounded(step=initial.n + k)
            break
        if len(points) >= w and all(abs(points[-j] - z) < cfg.eps_converge for j in range(2, w + 1)):
            outcome = ConvergedTo(limit=z)
            break
        zp, zc = zc, z

    if outcome is None:
        tail = points[cfg.transient_discard:] if len(points) > cfg.transient_discard else points
        if len(tail) >= 2 * cfg.max_period:
            hit = detect_cycle(tail, cfg.max_period, cfg.eps_cycle)
            if hit is not None:
                outcome = PeriodicCycle(period=hit[0], cycle=hit[1])
        if outcome is None:
            outcome = Undecided()

    return Orbit(
        params=params,
        initial=initial,
        points=tuple(points),
        outcome=outcome,
        iterations_used=len(points),
    )


# ---------------------------------------------------------------------------
# Outcome refinement against known invariant objects
# ---------------------------------------------------------------------------

LABEL_SINGULAR = "singular"
LABEL_UNBOUNDED = "unbounded"
LABEL_UNDECIDED = "undecided"
LABEL_EQ1 = "equilibrium-1"
LABEL_EQ2 = "equilibrium-2"
LABEL_OTHER_LIMIT = "other-limit"
LABEL_KNOWN_TWO_CYCLE = "known-two-cycle"
LABEL_OTHER_TWO_CYCLE = "other-two-cycle"


@dataclass(frozen=True)
class OrbitLabel:
    """classify_orbit result: a stable label plus the matching distance."""

    label: str
    distance: float | None = None


def _cycle_distance(cycle: Sequence[complex], pair: tuple[complex, complex]) -> float:
    """Hausdorff-style distance between a detected 2-cycle and a known pair."""
    a, b = pair
    d1 = max(abs(cycle[0] - a), abs(cycle[1] - b))
    d2 = max(abs(cycle[0] - b), abs(cycle[1] - a))
    return min(d1, d2)


def classify_orbit(
    orbit: Orbit,
    equilibria: Optional[tuple[complex, complex]] = None,
    two_cycle: Optional[tuple[complex, complex]] = None,
    eps: float = 1e-6,
) -> OrbitLabel:
    """Refine an orbit outcome by matching it to known invariant objects.

    ConvergedTo becomes "equilibrium-1"/"equilibrium-2"/"other-limit" by
    distance to the supplied equilibria; PeriodicCycle(2) becomes
    "known-two-cycle"/"other-two-cycle" by matching the supplied pair.  The
    distance to the nearest candidate is always recorded.
    """
    out = orbit.outcome
    if isinstance(out, Singular):
        return OrbitLabel(LABEL_SINGULAR)
    if isinstance(out, Unbounded):
        return OrbitLabel(LABEL_UNBOUNDED)
    if isinstance(out, Undecided):
        return OrbitLabel(LABEL_UNDECIDED)
    if isinstance(out, ConvergedTo):
        if equilibria is None:
            return OrbitLabel(LABEL_OTHER_LIMIT)
        d1 = abs(out.limit - equilibria[0])
        d2 = abs(out.limit - equilibria[1])
        if d1 <= d2 and d1 < eps:
            return OrbitLabel(LABEL_EQ1, d1)
        if d2 < eps:
            return OrbitLabel(LABEL_EQ2, d2)
        return OrbitLabel(LABEL_OTHER_LIMIT, min(d1, d2))
    if isinstance(out, PeriodicCycle):
        if out.period == 2 and two_cycle is not None:
            d = _cycle_distance(out.cycle, two_cycle)
            if d < eps:
                return OrbitLabel(LABEL_KNOWN_TWO_CYCLE, d)
            return OrbitLabel(LABEL_OTHER_TWO_CYCLE, d)
        if out.period == 2:
            return OrbitLabel(LABEL_OTHER_TWO_CYCLE)
        return OrbitLabel(f"cycle-p{out.period}")
    raise TypeError(f"unknown outcome {out!r}")


def short_cycle_config(cfg: ToleranceConfig, period: int = 2) -> ToleranceConfig:
    """Config for replaying a known short cycle from an exact start.

    Long runs are useless there: round-off grows like |multiplier|^n on an
    unstable cycle, so the replay must stay short enough that a genuinely
    periodic start still looks periodic in floating point.
    """
    iters = max(8 * period, 32)
    return replace(
        cfg,
        max_iters=iters,
        transient_discard=0,
        max_period=period,
        converge_window=min(cfg.converge_window, max(2, iters // 4)),
    )


def replay_residual(orbit: Orbit) -> float:
    """Max deviation when recomputing each stored point from its two
    predecessors; should sit at round-off for every orbit."""
    zp, zc = complex(orbit.initial.z_prev), complex(orbit.initial.z_curr)
    worst = 0.0
    for z in orbit.points:
        den = orbit.params.beta * zc + zp
        z_re = (orbit.params.alpha + zp) / den
        scale = max(1.0, abs(z))
        worst = max(worst, abs(z_re - z) / scale)
        zp, zc = zc, z
    return worst
