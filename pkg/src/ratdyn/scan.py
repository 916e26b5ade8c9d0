"""Parameter-space and initial-condition-space exploration.

Seeded, deterministic harnesses: extremum search for the stability
expressions, the |b| vs |1+4a| condition check, basin-of-attraction
rasters over sliced initial conditions, and the two conjecture evidence
collectors (higher-period search, chaos-vs-condition contingency).

Everything here is a pure function of (inputs, seed).  Basin rasters can
run across processes; the RATDYN_THREADS environment variable caps the
worker count and results are merged in input order, so a parallel raster
equals the serial one cell for cell.
"""

from __future__ import annotations

import math
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .coremap import (
    OrbitState,
    Params,
    PeriodicCycle,
    ToleranceConfig,
    Undecided,
    classify_orbit,
    iterate,
)
from .equilibria import Branch, equilibrium_values, stability_margin, saddle_margin
from .errors import DegenerateError, NoDistinctCycleError, OrbitDiedError, RatdynError
from .lyapunov import CHAOS_THRESHOLD, DEFAULT_N_STEPS, lyapunov_max
from .period_two import two_cycle

OBJECTIVE_STABILITY_Z1 = "stability_margin_z1"
OBJECTIVE_STABILITY_Z2 = "stability_margin_z2"
OBJECTIVE_SADDLE = "saddle_margin"
OBJECTIVES = (OBJECTIVE_STABILITY_Z1, OBJECTIVE_STABILITY_Z2, OBJECTIVE_SADDLE)

SLICE_Z_PREV_FIXED = "z_prev_fixed"
SLICE_Z_CURR_FIXED = "z_curr_fixed"
SLICE_DIAGONAL = "diagonal"
SLICES = (SLICE_Z_PREV_FIXED, SLICE_Z_CURR_FIXED, SLICE_DIAGONAL)


@dataclass(frozen=True)
class ScanGrid:
    """A square complex-plane grid: center, half-width, points per axis."""

    center: complex
    half_width: float
    resolution: int
    target: str = "initial_conditions"  # or "alpha_plane" / "beta_plane"

    def __post_init__(self):
        if self.resolution < 2:
            raise ValueError("resolution must be >= 2")
        if not self.half_width > 0:
            raise ValueError("half_width must be > 0")

    def axis(self) -> list[float]:
        n = self.resolution
        return [
            -self.half_width + 2 * self.half_width * k / (n - 1) for k in range(n)
        ]

    def point(self, row: int, col: int) -> complex:
        ax = self.axis()
        # row indexes the imaginary axis top-down so rasters read like images
        return self.center + complex(ax[col], ax[self.resolution - 1 - row])


@dataclass(frozen=True)
class BasinRaster:
    grid: ScanGrid
    labels: tuple[tuple[str, ...], ...]  # resolution x resolution
    params: Params
    config: ToleranceConfig
    slice_policy: str
    fixed_partner: complex


@dataclass(frozen=True)
class ExtremumResult:
    objective: str
    best_value: float
    best_params: Params
    evaluations: int
    seed: int


@dataclass(frozen=True)
class ConditionCheck:
    """The two magnitudes |b| and |1+4a| plus their comparison."""

    beta_mod: float
    one_plus_4alpha_mod: float
    beta_gt: bool


@dataclass(frozen=True)
class PeriodHit:
    params: Params
    initial: OrbitState
    period: int
    cycle: tuple[complex, ...]
    residual: float  # worst |tail[k+p] - tail[k]| over the detection window
    confirmed: bool  # still the same cycle after a second full iteration budget


@dataclass(frozen=True)
class PeriodHarnessReport:
    n_samples: int
    param_box: float
    seed: int
    counts: dict[int, int]  # detected prime period -> occurrences (p >= 2)
    hits_ge3: tuple[PeriodHit, ...]
    outcome_counts: dict[str, int]


@dataclass(frozen=True)
class ChaosSample:
    params: Params
    initial: OrbitState
    condition: ConditionCheck
    lambda_max: Optional[float]
    chaotic: Optional[bool]
    note: str = ""


@dataclass(frozen=True)
class ChaosHarnessReport:
    n_samples: int
    seed: int
    threshold: float
    # keys: (|b| < |1+4a|, chaotic) -> count; dead orbits are tallied apart
    contingency: dict[tuple[bool, bool], int]
    dead: int
    samples: tuple[ChaosSample, ...]
    violators: tuple[ChaosSample, ...]  # chaotic but |b| >= |1+4a|


# ---------------------------------------------------------------------------
# Extremum search
# ---------------------------------------------------------------------------


def _objective_fn(objective: str) -> tuple[Callable[[Params], float], bool]:
    """Return (evaluation, maximize) for an objective name."""
    if objective == OBJECTIVE_STABILITY_Z1:
        return (lambda p: stability_margin(p, Branch.MINUS)), False
    if objective == OBJECTIVE_STABILITY_Z2:
        return (lambda p: stability_margin(p, Branch.PLUS)), False
    if objective == OBJECTIVE_SADDLE:
        return (
            lambda p: max(saddle_margin(p, Branch.MINUS), saddle_margin(p, Branch.PLUS)),
            True,
        )
    raise ValueError(f"unknown objective {objective!r}; expected one of {OBJECTIVES}")


def evaluate_objective(objective: str, params: Params) -> float:
    fn, _ = _objective_fn(objective)
    return fn(params)


def _clip_disk(z: complex, radius: float) -> complex:
    m = abs(z)
    return z if m <= radius else z * (radius / m)


def find_extremum(
    objective: str,
    alpha_mod_max: float,
    beta_mod_max: float,
    budget: int = 100000,
    seed: int = 0,
) -> ExtremumResult:
    """Seeded multi-start random search plus coordinate-descent refinement.

    Optimizes over the four real coordinates of (a, b) constrained to
    |a| <= alpha_mod_max and |b| <= beta_mod_max.  Evaluations failing on
    degenerate parameters count against the budget and rank worst.  The
    refinement uses per-coordinate steps that grow on success and shrink on
    failure (twiddle search); the returned value is never worse than the
    best random start.  Deterministic for a given seed.
    """
    if budget < 100:
        raise ValueError("budget must be >= 100")
    fn, maximize = _objective_fn(objective)
    sign = -1.0 if maximize else 1.0
    rng = random.Random(seed)
    evals = 0

    def ev(x: list[float]) -> float:
        nonlocal evals
        evals += 1
        p = Params(alpha=complex(x[0], x[1]), beta=complex(x[2], x[3]))
        try:
            return sign * fn(p)
        except (DegenerateError, ZeroDivisionError, OverflowError):
            return math.inf

    def clip(x: list[float]) -> list[float]:
        a = _clip_disk(complex(x[0], x[1]), alpha_mod_max)
        b = _clip_disk(complex(x[2], x[3]), beta_mod_max)
        return [a.real, a.imag, b.real, b.imag]

    n_starts = max(16, budget // 2000)
    starts: list[tuple[float, list[float]]] = []
    while len(starts) < n_starts and evals < budget // 2:
        x = clip(
            [
                rng.uniform(-alpha_mod_max, alpha_mod_max),
                rng.uniform(-alpha_mod_max, alpha_mod_max),
                rng.uniform(-beta_mod_max, beta_mod_max),
                rng.uniform(-beta_mod_max, beta_mod_max),
            ]
        )
        starts.append((ev(x), x))
    starts.sort(key=lambda t: t[0])
    top = starts[: min(10, len(starts))]
    best_f, best_x = top[0]

    per_start = max(1, (budget - evals) // max(1, len(top)))
    scale = max(alpha_mod_max, beta_mod_max)
    for f0, x0 in top:
        x, f = list(x0), f0
        steps = [alpha_mod_max / 4, alpha_mod_max / 4, beta_mod_max / 4, beta_mod_max / 4]
        used = 0
        while used < per_start and max(steps) > 1e-14 * max(1.0, scale):
            improved_any = False
            for i in range(4):
                if used >= per_start:
                    break
                for sgn in (1.0, -1.0):
                    cand = list(x)
                    cand[i] += sgn * steps[i]
                    cand = clip(cand)
                    fc = ev(cand)
                    used += 1
                    if fc < f:
                        f, x = fc, cand
                        steps[i] *= 1.6
                        improved_any = True
                        break
                else:
                    steps[i] *= 0.55
            if not improved_any and max(steps) <= 1e-14 * max(1.0, scale):
                break
        if f < best_f:
            best_f, best_x = f, x

    best_params = Params(alpha=complex(best_x[0], best_x[1]), beta=complex(best_x[2], best_x[3]))
    return ExtremumResult(
        objective=objective,
        best_value=sign * best_f,
        best_params=best_params,
        evaluations=evals,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# Condition scan
# ---------------------------------------------------------------------------


def condition_check(params: Params) -> ConditionCheck:
    """Compare |b| against |1 + 4a|."""
    bm = abs(params.beta)
    am = abs(1 + 4 * params.alpha)
    return ConditionCheck(beta_mod=bm, one_plus_4alpha_mod=am, beta_gt=bm > am)


# ---------------------------------------------------------------------------
# Basin raster
# ---------------------------------------------------------------------------


def _initial_for(policy: str, point: complex, partner: complex) -> OrbitState:
    if policy == SLICE_Z_PREV_FIXED:
        return OrbitState(z_prev=partner, z_curr=point)
    if policy == SLICE_Z_CURR_FIXED:
        return OrbitState(z_prev=point, z_curr=partner)
    if policy == SLICE_DIAGONAL:
        return OrbitState(z_prev=point, z_curr=point)
    raise ValueError(f"unknown slice policy {policy!r}; expected one of {SLICES}")


def _known_objects(params: Params):
    try:
        eqs: Optional[tuple[complex, complex]] = equilibrium_values(params)
    except RatdynError:
        eqs = None
    try:
        cyc = two_cycle(params)
        pair: Optional[tuple[complex, complex]] = (cyc.phi, cyc.psi)
    except (RatdynError, NoDistinctCycleError):
        pair = None
    return eqs, pair


def _raster_rows(args) -> tuple[int, list[str]]:
    params, grid, cfg, policy, partner, eqs, pair, eps, row = args
    labels = []
    for col in range(grid.resolution):
        state = _initial_for(policy, grid.point(row, col), partner)
        orbit = iterate(params, state, cfg)
        labels.append(classify_orbit(orbit, eqs, pair, eps).label)
    return row, labels


def scan_workers() -> int:
    """Worker cap from RATDYN_THREADS; 1 (serial) when unset or invalid."""
    raw = os.environ.get("RATDYN_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def basin_raster(
    params: Params,
    grid: ScanGrid,
    cfg: ToleranceConfig,
    fixed_partner: str = SLICE_DIAGONAL,
    partner_value: complex = 0j,
    match_eps: float = 1e-6,
    workers: Optional[int] = None,
) -> BasinRaster:
    """Label every grid point by its orbit fate.

    The two-complex-dimensional initial-condition space is sliced per
    ``fixed_partner``: one coordinate pinned to ``partner_value`` or the
    diagonal pair (c, c).  Labels come from classify_orbit against the
    parameters' equilibria and two-cycle (when those exist).  Row order is
    deterministic regardless of the worker count.
    """
    eqs, pair = _known_objects(params)
    n = grid.resolution
    jobs = [
        (params, grid, cfg, fixed_partner, partner_value, eqs, pair, match_eps, row)
        for row in range(n)
    ]
    nworkers = scan_workers() if workers is None else max(1, workers)
    rows: list[Optional[list[str]]] = [None] * n
    if nworkers == 1:
        for job in jobs:
            idx, labels = _raster_rows(job)
            rows[idx] = labels
    else:
        with ProcessPoolExecutor(max_workers=nworkers) as pool:
            for idx, labels in pool.map(_raster_rows, jobs):
                rows[idx] = labels
    return BasinRaster(
        grid=grid,
        labels=tuple(tuple(r) for r in rows),  # type: ignore[arg-type]
        params=params,
        config=cfg,
        slice_policy=fixed_partner,
        fixed_partner=partner_value,
    )


# ---------------------------------------------------------------------------
# Conjecture harnesses
# ---------------------------------------------------------------------------


def _uniform_complex(rng: random.Random, half_width: float) -> complex:
    return complex(rng.uniform(-half_width, half_width), rng.uniform(-half_width, half_width))


def conjecture_p3_harness(
    n_samples: int,
    param_box: float,
    cfg: ToleranceConfig,
    seed: int = 0,
) -> PeriodHarnessReport:
    """Search for forward-orbit periods >= 3 over random parameters/starts.

    Samples (a, b, z_prev, z_curr) uniformly from the square of half-width
    ``param_box``, iterates with the standard classifier, and tallies every
    detected prime period.  Each period >= 3 candidate is re-run for a
    second full iteration budget from where the first run ended: a decaying
    near-resonant spiral loses its fake periodicity there, while a genuine
    attracting cycle keeps its period and tightens onto round-off, which is
    recorded in ``confirmed``.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = random.Random(seed)
    counts: dict[int, int] = {}
    outcome_counts: dict[str, int] = {}
    hits: list[PeriodHit] = []
    for _ in range(n_samples):
        params = Params(alpha=_uniform_complex(rng, param_box), beta=_uniform_complex(rng, param_box))
        initial = OrbitState(
            z_prev=_uniform_complex(rng, param_box), z_curr=_uniform_complex(rng, param_box)
        )
        orbit = iterate(params, initial, cfg)
        out = orbit.outcome
        outcome_counts[out.kind] = outcome_counts.get(out.kind, 0) + 1
        if not isinstance(out, PeriodicCycle):
            continue
        counts[out.period] = counts.get(out.period, 0) + 1
        if out.period < 3:
            continue
        p = out.period
        tail = orbit.points[-2 * cfg.max_period:]
        residual = max(abs(tail[k + p] - tail[k]) for k in range(len(tail) - p))
        confirmed = False
        if len(orbit.points) >= 2:
            again = iterate(
                params,
                OrbitState(z_prev=orbit.points[-2], z_curr=orbit.points[-1]),
                cfg,
            )
            confirmed = isinstance(again.outcome, PeriodicCycle) and again.outcome.period == p
        hits.append(
            PeriodHit(
                params=params,
                initial=initial,
                period=p,
                cycle=out.cycle,
                residual=residual,
                confirmed=confirmed,
            )
        )
    return PeriodHarnessReport(
        n_samples=n_samples,
        param_box=param_box,
        seed=seed,
        counts=dict(sorted(counts.items())),
        hits_ge3=tuple(hits),
        outcome_counts=dict(sorted(outcome_counts.items())),
    )


def conjecture_chaos_harness(
    n_samples: int,
    cfg: ToleranceConfig,
    seed: int = 0,
    param_box: float = 3.0,
    threshold: float = CHAOS_THRESHOLD,
    n_steps: int = DEFAULT_N_STEPS,
    extra_params: Sequence[Params] = (),
) -> ChaosHarnessReport:
    """Cross-tabulate the |b| < |1+4a| condition against measured chaos.

    ``extra_params`` rows (e.g. the reference chaotic-parameter table) run
    first with a seeded initial pair; then ``n_samples`` random parameter
    pairs.  Orbits that die before the Lyapunov window ends are tallied in
    ``dead``.  A sample is chaotic when its exponent exceeds ``threshold``
    and the orbit stays bounded-aperiodic.
    """
    if n_samples < 0:
        raise ValueError("n_samples must be >= 0")
    rng = random.Random(seed)
    contingency: dict[tuple[bool, bool], int] = {
        (False, False): 0,
        (False, True): 0,
        (True, False): 0,
        (True, True): 0,
    }
    samples: list[ChaosSample] = []
    dead = 0

    def run_one(params: Params, initial: OrbitState, note: str) -> None:
        nonlocal dead
        cond = condition_check(params)
        try:
            est = lyapunov_max(params, initial, cfg, n_steps=n_steps)
        except OrbitDiedError as exc:
            dead += 1
            samples.append(
                ChaosSample(params=params, initial=initial, condition=cond, lambda_max=None,
                            chaotic=None, note=f"{note}died:{exc.step}")
            )
            return
        chaotic = est.lambda_max > threshold and isinstance(est.orbit_outcome, Undecided)
        contingency[(not cond.beta_gt, chaotic)] += 1
        samples.append(
            ChaosSample(params=params, initial=initial, condition=cond,
                        lambda_max=est.lambda_max, chaotic=chaotic, note=note)
        )

    for i, params in enumerate(extra_params):
        initial = OrbitState(
            z_prev=_uniform_complex(rng, 1.0), z_curr=_uniform_complex(rng, 1.0)
        )
        run_one(params, initial, note=f"fixture:{i}")
    for _ in range(n_samples):
        params = Params(alpha=_uniform_complex(rng, param_box), beta=_uniform_complex(rng, param_box))
        initial = OrbitState(
            z_prev=_uniform_complex(rng, 1.0), z_curr=_uniform_complex(rng, 1.0)
        )
        run_one(params, initial, note="random")

    violators = tuple(s for s in samples if s.chaotic and s.condition.beta_gt)
    return ChaosHarnessReport(
        n_samples=n_samples,
        seed=seed,
        threshold=threshold,
        contingency=contingency,
        dead=dead,
        samples=tuple(samples),
        violators=violators,
    )
