"""Largest Lyapunov exponent along an orbit, by tangent-vector evolution.

A unit complex 2-vector is pushed through the map Jacobian at every step
and renormalized; the average log stretch over the post-transient window is
the largest exponent.  The map is holomorphic away from its singular set,
so complex 2x2 tangent dynamics suffice (the real 4x4 embedding's exponents
pair up and the largest is unchanged); the finite-difference oracle checks
that via the equality of real-axis and imaginary-axis directional
derivatives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .coremap import (
    OrbitOutcome,
    OrbitState,
    Params,
    Singular,
    ToleranceConfig,
    Unbounded,
    Undecided,
    iterate,
)
from .errors import NonFiniteError, NotConvergedError, OrbitDiedError, SingularError
from .numerics import Matrix2, mat_vec, rel_error, vec_norm
from .period_two import apply_map, map_jacobian

DEFAULT_N_STEPS = 50000
CHAOS_THRESHOLD = 0.01
_SERIES_BLOCKS = 200
_NORM_FLOOR = 1e-150
_NORM_CEIL = 1e150
_DEFAULT_TANGENT = (0.6 + 0.3j, 0.5 - 0.55j)


@dataclass(frozen=True)
class LyapunovEstimate:
    """Largest-exponent estimate with convergence diagnostics.

    ``running_series`` holds the partial averages sampled once per
    decimation block; its final entry equals ``lambda_max``.  ``converged``
    requires the last quartile of the series to drift by less than
    0.05 * max(1, |lambda_max|).
    """

    lambda_max: float
    iterations: int
    transient_discarded: int
    running_series: tuple[float, ...]
    converged: bool
    orbit_outcome: OrbitOutcome


def jacobian_fd(params: Params, state: OrbitState, step: float = 1e-7) -> Matrix2:
    """Finite-difference Jacobian of T(u, v) = (v, (a+u)/(b v+u)).

    Central differences along the real axis of each complex coordinate; by
    holomorphy one directional derivative per coordinate determines the
    complex derivative.  The imaginary-axis derivative is also formed and
    must agree to 1e-5 relative, a direct Cauchy-Riemann check.
    """
    u, v = state.z_prev, state.z_curr
    den = params.beta * v + u
    if abs(den) <= 10 * step:
        raise SingularError(
            f"state too close to the singular set for differencing: |den| = {abs(den):.3e}"
        )
    cols_re = []
    cols_im = []
    for du, dv in ((step, 0.0), (0.0, step)):
        up = apply_map(params, u + du, v + dv)
        um = apply_map(params, u - du, v - dv)
        cols_re.append(((up[0] - um[0]) / (2 * step), (up[1] - um[1]) / (2 * step)))
        uip = apply_map(params, u + 1j * du, v + 1j * dv)
        uim = apply_map(params, u - 1j * du, v - 1j * dv)
        cols_im.append(((uip[0] - uim[0]) / (2j * step), (uip[1] - uim[1]) / (2j * step)))
    worst = max(
        rel_error(cols_im[j][i], cols_re[j][i]) for i in range(2) for j in range(2)
    )
    if worst > 1e-5:
        raise NonFiniteError(
            f"directional derivatives violate holomorphy tolerance: {worst:.3e}"
        )
    return [[cols_re[0][0], cols_re[1][0]], [cols_re[0][1], cols_re[1][1]]]


def lyapunov_max(
    params: Params,
    initial: OrbitState,
    cfg: ToleranceConfig,
    n_steps: int = DEFAULT_N_STEPS,
    tangent0: tuple[complex, complex] = _DEFAULT_TANGENT,
) -> LyapunovEstimate:
    """Largest Lyapunov exponent (nats per iteration) along one orbit.

    The orbit must survive cfg.transient_discard + n_steps steps; a
    singular or escaping trajectory raises OrbitDiedError.  n_steps of a
    few thousand or more gives stable estimates.  The orbit outcome is
    classified with the standard iterator rules over the same horizon and
    attached to the estimate.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    total = cfg.transient_discard + n_steps
    probe = iterate(params, initial, replace(cfg, max_iters=total))
    if isinstance(probe.outcome, (Singular, Unbounded)):
        raise OrbitDiedError(
            f"orbit died ({probe.outcome.kind}) at step {probe.outcome.step}",
            step=probe.outcome.step,
        )

    nrm0 = vec_norm(tangent0)
    if not (nrm0 > 0 and math.isfinite(nrm0)):
        raise ValueError("tangent0 must be a nonzero finite vector")
    w = [tangent0[0] / nrm0, tangent0[1] / nrm0]
    zp, zc = complex(initial.z_prev), complex(initial.z_curr)

    block = max(1, n_steps // _SERIES_BLOCKS)
    series: list[float] = []
    acc = 0.0
    done = 0
    for k in range(total):
        jac = map_jacobian(params, zp, zc)
        zp, zc = apply_map(params, zp, zc)
        w = mat_vec(jac, w)
        nrm = vec_norm(w)
        if not (nrm > _NORM_FLOOR and nrm < _NORM_CEIL) or not math.isfinite(nrm):
            raise NonFiniteError(f"tangent norm left [{_NORM_FLOOR:g}, {_NORM_CEIL:g}] at step {k}")
        w = [w[0] / nrm, w[1] / nrm]
        if k >= cfg.transient_discard:
            acc += math.log(nrm)
            done += 1
            if done % block == 0 or done == n_steps:
                series.append(acc / done)

    lam = acc / done
    quart = series[-max(1, len(series) // 4):]
    drift = max(quart) - min(quart)
    converged = drift < 0.05 * max(1.0, abs(lam))
    return LyapunovEstimate(
        lambda_max=lam,
        iterations=n_steps,
        transient_discarded=cfg.transient_discard,
        running_series=tuple(series),
        converged=converged,
        orbit_outcome=probe.outcome,
    )


def classify_chaotic(estimate: LyapunovEstimate, threshold: float = CHAOS_THRESHOLD) -> bool:
    """Chaos flag: positive exponent on a bounded aperiodic orbit.

    True only when lambda_max exceeds the threshold and the orbit outcome
    is Undecided; convergent or periodic orbits with transient stretching
    do not count.  Requires a converged estimate.
    """
    if not estimate.converged:
        raise NotConvergedError("estimate failed its drift test; rerun with more steps")
    return estimate.lambda_max > threshold and isinstance(estimate.orbit_outcome, Undecided)
