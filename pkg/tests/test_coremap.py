"""Core map: stepping, orbit iteration, outcome detection, classification."""

import random

import pytest

from ratdyn import (
    ConvergedTo,
    OrbitState,
    Params,
    PeriodicCycle,
    Singular,
    SingularError,
    ToleranceConfig,
    Unbounded,
    Undecided,
    classify_orbit,
    detect_cycle,
    iterate,
    step,
)
from ratdyn.coremap import replay_residual
from ratdyn.equilibria import equilibrium_values
from ratdyn.errors import InsufficientDataError
from ratdyn.period_two import two_cycle

CFG = ToleranceConfig()


def rand_complex(rng, scale=1.0):
    return complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale))


class TestStep:
    def test_zero_params_is_constant_one(self):
        p = Params(alpha=0j, beta=0j)
        assert step(p, OrbitState(z_prev=5 + 0j, z_curr=7 - 3j)) == 1

    def test_beta_zero_fixed_point(self):
        p = Params(alpha=2 + 0j, beta=0j)
        assert step(p, OrbitState(z_prev=2 + 0j, z_curr=7 + 0j)) == 2

    def test_two_cycle_point_maps_to_partner(self):
        # quoted cycle value for alpha=1, beta=1+i
        p = Params(alpha=1 + 0j, beta=1 + 1j)
        phi = 1.30024 + 0.624811j
        psi = -0.300243 - 0.624811j
        assert abs(step(p, OrbitState(z_prev=phi, z_curr=psi)) - phi) < 1e-4

    def test_singular_denominator_raises(self):
        p = Params(alpha=1 + 0j, beta=1 + 0j)
        with pytest.raises(SingularError):
            step(p, OrbitState(z_prev=-1 + 0j, z_curr=1 + 0j))


class TestIterate:
    def test_always_convergent_example(self):
        # |b| > |1+4a| yet every sampled start converges (measured fact;
        # both equilibria are attracting for this parameter pair)
        p = Params(
            alpha=0.530797553008973 + 0.779167230102011j,
            beta=4.670053421145915 + 1.299062084737301j,
        )
        z2 = equilibrium_values(p)[1]
        rng = random.Random(42)
        for _ in range(3):
            orbit = iterate(p, OrbitState(rand_complex(rng), rand_complex(rng)), CFG)
            assert isinstance(orbit.outcome, ConvergedTo)
            assert abs(orbit.outcome.limit - z2) < 1e-6

    def test_constant_map_converges_fast(self):
        p = Params(alpha=0j, beta=0j)
        orbit = iterate(p, OrbitState(z_prev=0.3 + 1j, z_curr=-2 + 0.5j), CFG)
        assert isinstance(orbit.outcome, ConvergedTo)
        assert orbit.outcome.limit == 1
        assert orbit.iterations_used <= CFG.converge_window + 2

    def test_cycle_start_classifies_period_two(self):
        p = Params(alpha=51 + 8j, beta=26 + 80j)
        cyc = two_cycle(p)
        orbit = iterate(p, OrbitState(z_prev=cyc.phi, z_curr=cyc.psi), CFG)
        assert isinstance(orbit.outcome, PeriodicCycle)
        assert orbit.outcome.period == 2

    def test_singular_outcome_and_soundness(self):
        p = Params(alpha=1 + 0j, beta=1 + 0j)
        orbit = iterate(p, OrbitState(z_prev=-1 + 0j, z_curr=1 + 0j), CFG)
        assert orbit.outcome == Singular(step=0)
        assert orbit.points == ()

    def test_unbounded_outcome(self):
        # start just off the singular set so the first iterate explodes
        p = Params(alpha=1 + 0j, beta=1 + 0j)
        orbit = iterate(p, OrbitState(z_prev=-1 + 1e-10j, z_curr=1 + 0j), CFG)
        assert isinstance(orbit.outcome, (Unbounded, Singular))
        if isinstance(orbit.outcome, Unbounded):
            assert abs(orbit.points[orbit.outcome.step - orbit.initial.n]) > CFG.radius_unbounded

    def test_outcome_deterministic(self):
        p = Params(alpha=0.5747 + 0.3260j, beta=0.9128 + 2.1413j)
        s = OrbitState(z_prev=0.1 + 0.2j, z_curr=-0.3 + 0.05j)
        o1 = iterate(p, s, CFG)
        o2 = iterate(p, s, CFG)
        assert o1 == o2


class TestDetectCycle:
    def test_alternating_pair(self):
        a, b = 0.2 + 0.1j, -0.7 + 0.4j
        tail = [a, b] * 60
        assert detect_cycle(tail, max_period=10, eps_cycle=1e-6) == (2, (a, b))

    def test_constant_tail_is_not_a_cycle(self):
        tail = [0.5 + 0.5j] * 120
        assert detect_cycle(tail, max_period=10, eps_cycle=1e-6) is None

    def test_reference_row_alternation(self):
        phi, psi = 0.03921 - 0.29456j, 0.96078 + 0.29456j
        tail = [phi, psi] * 60
        period, cycle = detect_cycle(tail, max_period=50, eps_cycle=1e-6)
        assert period == 2
        assert set(cycle) == {phi, psi}

    def test_composite_period_reports_prime(self):
        a, b, c = 0.1 + 0j, 0.8 + 0.1j, -0.5 - 0.2j
        tail = [a, b, c] * 40
        period, _ = detect_cycle(tail, max_period=12, eps_cycle=1e-6)
        assert period == 3

    def test_short_tail_raises(self):
        with pytest.raises(InsufficientDataError):
            detect_cycle([1 + 0j] * 19, max_period=10, eps_cycle=1e-6)


class TestClassifyOrbit:
    def setup_method(self):
        self.p = Params(alpha=51 + 8j, beta=26 + 80j)
        self.eqs = equilibrium_values(self.p)
        cyc = two_cycle(self.p)
        self.pair = (cyc.phi, cyc.psi)

    def test_cycle_match(self):
        orbit = iterate(self.p, OrbitState(z_prev=self.pair[0], z_curr=self.pair[1]), CFG)
        lab = classify_orbit(orbit, self.eqs, self.pair)
        assert lab.label == "known-two-cycle"
        assert lab.distance < 1e-6

    def test_limit_labels(self):
        p = Params(
            alpha=0.530797553008973 + 0.779167230102011j,
            beta=4.670053421145915 + 1.299062084737301j,
        )
        eqs = equilibrium_values(p)
        orbit = iterate(p, OrbitState(z_prev=0.3 + 0.2j, z_curr=0.1 - 0.4j), CFG)
        lab = classify_orbit(orbit, eqs, None)
        assert lab.label == "equilibrium-2"
        # far-away fake equilibria force the other-limit label, distance kept
        lab2 = classify_orbit(orbit, (100 + 0j, 200 + 0j), None)
        assert lab2.label == "other-limit"
        assert lab2.distance == pytest.approx(abs(orbit.outcome.limit - 100))

    def test_outcome_passthrough_labels(self):
        p = Params(alpha=1 + 0j, beta=1 + 0j)
        orbit = iterate(p, OrbitState(z_prev=-1 + 0j, z_curr=1 + 0j), CFG)
        assert classify_orbit(orbit, None, None).label == "singular"


class TestInvariants:
    def test_replay(self):
        rng = random.Random(7)
        for _ in range(25):
            p = Params(alpha=rand_complex(rng, 3), beta=rand_complex(rng, 3))
            orbit = iterate(
                p,
                OrbitState(z_prev=rand_complex(rng, 2), z_curr=rand_complex(rng, 2)),
                ToleranceConfig(max_iters=400, transient_discard=100),
            )
            if orbit.points:
                assert replay_residual(orbit) < 1e-12

    def test_fixed_point_invariance_50_steps(self):
        # mildly contracting / marginal equilibria: round-off must not move
        # the orbit off the fixed point within 50 steps
        cases = [
            Params(alpha=25 + 22j, beta=67 + 85j),
            Params(
                alpha=0.530797553008973 + 0.779167230102011j,
                beta=4.670053421145915 + 1.299062084737301j,
            ),
        ]
        cfg = ToleranceConfig(max_iters=50, transient_discard=0, converge_window=50)
        for p in cases:
            for z in equilibrium_values(p):
                orbit = iterate(p, OrbitState(z_prev=z, z_curr=z), cfg)
                assert all(abs(w - z) < 1e-9 for w in orbit.points)

    def test_two_cycle_invariance_50_steps(self):
        # stable reference cycle: double-step returns to the start
        p = Params(alpha=0.6855 + 0.2941j, beta=1.06125 + 2.49727j)
        cyc = two_cycle(p)
        cfg = ToleranceConfig(max_iters=100, transient_discard=0, converge_window=100)
        orbit = iterate(p, OrbitState(z_prev=cyc.phi, z_curr=cyc.psi), cfg)
        for k, z in enumerate(orbit.points[:100]):
            ref = cyc.phi if k % 2 == 0 else cyc.psi
            assert abs(z - ref) < 1e-9

    def test_singular_soundness_on_random_sweep(self):
        rng = random.Random(99)
        cfg = ToleranceConfig(max_iters=300, transient_discard=50)
        seen = 0
        for _ in range(300):
            p = Params(alpha=rand_complex(rng, 3), beta=rand_complex(rng, 3))
            init = OrbitState(z_prev=rand_complex(rng, 3), z_curr=rand_complex(rng, 3))
            orbit = iterate(p, init, cfg)
            if isinstance(orbit.outcome, Singular):
                seen += 1
                pts = (init.z_prev, init.z_curr) + orbit.points
                zp, zc = pts[-2], pts[-1]
                assert abs(p.beta * zc + zp) < cfg.eps_singular
        assert seen >= 0  # sweep may legitimately find none


class TestToleranceConfig:
    def test_rejects_bad_values(self):
        with pytest.raises(ValueError):
            ToleranceConfig(transient_discard=100, max_iters=100)
        with pytest.raises(ValueError):
            ToleranceConfig(converge_window=1)
        with pytest.raises(ValueError):
            ToleranceConfig(eps_singular=0.0)
        with pytest.raises(ValueError):
            ToleranceConfig(converge_window=50, max_iters=40)
