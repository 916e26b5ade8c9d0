"""Largest-exponent estimation: oracles, consistency checks, classification."""

import math
import random

import pytest

from ratdyn import (
    ConvergedTo,
    NotConvergedError,
    OrbitDiedError,
    OrbitState,
    Params,
    SingularError,
    ToleranceConfig,
    Undecided,
    classify_chaotic,
    classify_roots,
    equilibrium_values,
    jacobian_fd,
    linearize_at,
    lyapunov_max,
    map_jacobian,
    t2_jacobian,
    two_cycle,
)
from ratdyn.lyapunov import LyapunovEstimate
from ratdyn.numerics import eigen_moduli

CFG = ToleranceConfig()


def rand_complex(rng, scale=1.0):
    return complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale))


class TestJacobianFd:
    def test_structure(self):
        p = Params(alpha=1 + 1j, beta=2 - 0.5j)
        jac = jacobian_fd(p, OrbitState(z_prev=0.4 + 0.2j, z_curr=-0.3 + 0.8j))
        assert abs(jac[0][0]) < 1e-10
        assert abs(jac[0][1] - 1) < 1e-10

    def test_matches_analytic_sampled(self):
        rng = random.Random(4)
        checked = 0
        while checked < 100:
            p = Params(alpha=rand_complex(rng, 3), beta=rand_complex(rng, 3))
            u, v = rand_complex(rng, 2), rand_complex(rng, 2)
            if abs(p.beta * v + u) < 1e-2:
                continue
            fd = jacobian_fd(p, OrbitState(z_prev=u, z_curr=v))
            an = map_jacobian(p, u, v)
            for i in range(2):
                for j in range(2):
                    assert abs(fd[i][j] - an[i][j]) / max(1.0, abs(an[i][j])) < 1e-6
            checked += 1

    def test_near_singular_raises(self):
        p = Params(alpha=1 + 0j, beta=1 + 0j)
        with pytest.raises(SingularError):
            jacobian_fd(p, OrbitState(z_prev=-1 + 0j, z_curr=1 + 0j))


class TestEstimate:
    def test_attracting_fixed_point_rate(self):
        # exponent at an attracting equilibrium equals log of the larger
        # linearization root modulus
        p = Params(
            alpha=0.530797553008973 + 0.779167230102011j,
            beta=4.670053421145915 + 1.299062084737301j,
        )
        z2 = equilibrium_values(p)[1]
        _, moduli = classify_roots(linearize_at(p, z2))
        est = lyapunov_max(
            p, OrbitState(z_prev=z2 + 1e-8, z_curr=z2 + 1e-8), CFG, n_steps=5000
        )
        assert est.lambda_max == pytest.approx(math.log(moduli[0]), abs=0.05)
        assert isinstance(est.orbit_outcome, ConvergedTo)
        assert classify_chaotic(est) is False

    def test_stable_two_cycle_rate(self):
        p = Params(alpha=0.6855 + 0.2941j, beta=1.06125 + 2.49727j)
        cyc = two_cycle(p)
        m_max = eigen_moduli(t2_jacobian(p, cyc))[0]
        est = lyapunov_max(
            p, OrbitState(z_prev=cyc.phi, z_curr=cyc.psi), CFG, n_steps=4000
        )
        assert est.lambda_max == pytest.approx(0.5 * math.log(m_max), abs=0.05)
        assert est.lambda_max < 0

    def test_chaotic_reference_row(self):
        # measured exponent for the first reference chaotic row is ~0.035
        # (tangent and two-trajectory methods agree); positive but far from
        # the quoted 1.3215
        p = Params(alpha=0.096455 + 0.13197j, beta=0.94205 + 0.95613j)
        est = lyapunov_max(p, OrbitState(z_prev=0.3 + 0.2j, z_curr=-0.1 + 0.4j), CFG, n_steps=30000)
        assert 0.01 < est.lambda_max < 0.08
        assert est.converged
        assert isinstance(est.orbit_outcome, Undecided)
        assert classify_chaotic(est) is True

    def test_tangent_direction_independence(self):
        p = Params(alpha=0.096455 + 0.13197j, beta=0.94205 + 0.95613j)
        init = OrbitState(z_prev=0.25 - 0.1j, z_curr=0.4 + 0.3j)
        e1 = lyapunov_max(p, init, CFG, n_steps=10000, tangent0=(1 + 0j, 0j))
        e2 = lyapunov_max(p, init, CFG, n_steps=10000, tangent0=(0.1 - 0.9j, 0.4 + 0.2j))
        assert abs(e1.lambda_max - e2.lambda_max) < 0.02

    def test_running_series_contract(self):
        p = Params(alpha=0.5114 + 0.0606j, beta=1.45137 + 1.6696j)
        est = lyapunov_max(p, OrbitState(z_prev=0.2 + 0.1j, z_curr=0.3 - 0.2j), CFG, n_steps=5000)
        assert est.running_series[-1] == est.lambda_max
        assert est.iterations == 5000
        assert est.transient_discarded == CFG.transient_discard
        quart = est.running_series[-max(1, len(est.running_series) // 4):]
        drift = max(quart) - min(quart)
        assert est.converged == (drift < 0.05 * max(1.0, abs(est.lambda_max)))

    def test_dead_orbit_raises_with_step(self):
        p = Params(alpha=1 + 0j, beta=1 + 0j)
        with pytest.raises(OrbitDiedError) as exc:
            lyapunov_max(p, OrbitState(z_prev=-1 + 0j, z_curr=1 + 0j), CFG, n_steps=2000)
        assert exc.value.step == 0

    def test_determinism(self):
        p = Params(alpha=0.8235 + 0.175j, beta=0.32713 + 1.9979j)
        init = OrbitState(z_prev=0.5 + 0.1j, z_curr=-0.2 + 0.3j)
        a = lyapunov_max(p, init, CFG, n_steps=3000)
        b = lyapunov_max(p, init, CFG, n_steps=3000)
        assert a == b


class TestClassifyChaotic:
    def _mk(self, lam, converged=True, outcome=Undecided()):
        return LyapunovEstimate(
            lambda_max=lam,
            iterations=1000,
            transient_discarded=0,
            running_series=(lam,),
            converged=converged,
            orbit_outcome=outcome,
        )

    def test_positive_undecided_is_chaotic(self):
        assert classify_chaotic(self._mk(1.32)) is True

    def test_negative_is_not(self):
        assert classify_chaotic(self._mk(-0.4)) is False

    def test_transient_stretching_is_not(self):
        est = self._mk(0.5, outcome=ConvergedTo(limit=1 + 0j))
        assert classify_chaotic(est) is False

    def test_unconverged_raises(self):
        with pytest.raises(NotConvergedError):
            classify_chaotic(self._mk(0.5, converged=False))
