"""Closed-form dynamics against the fixed-step integrator and measurement model."""

import math

import numpy as np
import pytest

from qubitband import (
    BlochState,
    InvalidBloch,
    NegativeTime,
    OverdampedRegime,
    QubitParams,
    StepTooLarge,
    bloch_at,
    damped_frequency,
    ode_evolve,
    ode_trajectory,
    prob_plus,
)

# rz(1.0), ry(1.0) for f=1, kappa=0.1 from ode_evolve at dt=1e-5, frozen
RZ_ORACLE_T1 = 0.8186435855203816
RY_ORACLE_T1 = 0.002608078594670296


class TestDampedFrequency:
    def test_undamped_equals_angular_rate(self):
        assert damped_frequency(QubitParams(f=1.0, kappa=0.0)) == pytest.approx(2 * math.pi)

    def test_direct_evaluation(self):
        mu = damped_frequency(QubitParams(f=1.0, kappa=0.1))
        assert mu == pytest.approx(math.sqrt(4 * math.pi**2 - 0.04), rel=0, abs=1e-15)

    def test_overdamped_rejected(self):
        with pytest.raises(OverdampedRegime):
            damped_frequency(QubitParams(f=0.05, kappa=0.2))

    def test_param_validation(self):
        with pytest.raises(ValueError):
            QubitParams(f=0.0, kappa=0.1)
        with pytest.raises(ValueError):
            QubitParams(f=1.0, kappa=-0.01)


class TestBlochAt:
    @pytest.mark.parametrize("kappa", [0.0, 0.02, 0.1, 0.3])
    def test_initial_condition(self, kappa):
        s = bloch_at(QubitParams(f=1.0, kappa=kappa), 0.0)
        assert (s.rx, s.ry, s.rz) == (0.0, 0.0, 1.0)
        assert prob_plus(s) == 1.0

    def test_quarter_period_undamped(self):
        s = bloch_at(QubitParams(f=1.0, kappa=0.0), 0.25)
        assert s.rz == pytest.approx(0.0, abs=1e-12)
        assert s.ry == pytest.approx(-1.0, abs=1e-12)

    def test_matches_ode_oracle_at_t1(self):
        # independent oracle: fixed-step integration at dt=1e-5
        params = QubitParams(f=1.0, kappa=0.1)
        oracle = ode_evolve(params, 1.0, dt=1e-5)
        assert oracle.rz == pytest.approx(RZ_ORACLE_T1, abs=1e-9)
        assert oracle.ry == pytest.approx(RY_ORACLE_T1, abs=1e-9)
        analytic = bloch_at(params, 1.0)
        assert analytic.rz == pytest.approx(oracle.rz, abs=1e-6)
        assert analytic.ry == pytest.approx(oracle.ry, abs=1e-6)

    def test_negative_time_rejected(self):
        with pytest.raises(NegativeTime):
            bloch_at(QubitParams(f=1.0, kappa=0.1), -0.5)

    def test_overdamped_rejected(self):
        with pytest.raises(OverdampedRegime):
            bloch_at(QubitParams(f=0.05, kappa=0.2), 1.0)


class TestOdeEvolve:
    def test_no_evolution(self):
        s = ode_evolve(QubitParams(f=1.0, kappa=0.1), 0.0, dt=1e-4)
        assert (s.rx, s.ry, s.rz) == (0.0, 0.0, 1.0)

    def test_self_consistency_at_t5(self):
        params = QubitParams(f=1.0, kappa=0.1)
        s = ode_evolve(params, 5.0, dt=1e-4)
        a = bloch_at(params, 5.0)
        for got, want in [(s.rx, a.rx), (s.ry, a.ry), (s.rz, a.rz)]:
            assert got == pytest.approx(want, abs=1e-8)

    def test_undamped_full_period(self):
        s = ode_evolve(QubitParams(f=1.0, kappa=0.0), 1.0, dt=1e-4)
        assert s.rz == pytest.approx(1.0, abs=1e-8)

    def test_step_guard(self):
        with pytest.raises(StepTooLarge):
            ode_evolve(QubitParams(f=1.0, kappa=0.0), 1.0, dt=0.02)

    def test_trajectory_matches_single_shot(self):
        params = QubitParams(f=1.0, kappa=0.05)
        times = [0.0, 0.7, 1.3, 4.0]
        traj = ode_trajectory(params, times, dt=1e-3)
        for state in traj:
            a = bloch_at(params, state.t)
            assert state.rz == pytest.approx(a.rz, abs=1e-8)


class TestInvariants:
    @pytest.mark.parametrize("kappa", [0.0, 0.02, 0.1, 0.3])
    def test_oracle_equivalence_on_grid(self, kappa):
        params = QubitParams(f=1.0, kappa=kappa)
        times = np.linspace(0.0, 20.0, 41)
        for state in ode_trajectory(params, times, dt=1e-3):
            a = bloch_at(params, state.t)
            assert abs(state.rx - a.rx) < 1e-6
            assert abs(state.ry - a.ry) < 1e-6
            assert abs(state.rz - a.rz) < 1e-6

    def test_rx_identically_zero(self):
        params = QubitParams(f=1.3, kappa=0.2)
        for t in np.linspace(0, 30, 301):
            assert bloch_at(params, float(t)).rx == 0.0

    @pytest.mark.parametrize("kappa", [0.0, 0.05, 0.3])
    def test_norm_non_increasing(self, kappa):
        params = QubitParams(f=1.0, kappa=kappa)
        norms = [bloch_at(params, float(t)).norm for t in np.linspace(0, 40, 801)]
        diffs = np.diff(norms)
        assert np.all(diffs <= 1e-9)
        assert norms[0] == pytest.approx(1.0, abs=1e-12)

    def test_undamped_is_pure_cosine(self):
        params = QubitParams(f=1.0, kappa=0.0)
        for t in np.linspace(0, 10, 101):
            s = bloch_at(params, float(t))
            assert s.rz == pytest.approx(math.cos(2 * math.pi * t), abs=1e-12)
            assert s.norm == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("kappa", [0.0, 0.1, 0.3])
    def test_prob_plus_in_unit_interval(self, kappa):
        params = QubitParams(f=0.7, kappa=kappa)
        for t in np.linspace(0, 25, 501):
            p = prob_plus(bloch_at(params, float(t)))
            assert 0.0 <= p <= 1.0


class TestProbPlus:
    def test_eigenstates_and_equator(self):
        assert prob_plus(BlochState(0, 0, 1.0, 0.0)) == 1.0
        assert prob_plus(BlochState(0, 0, -1.0, 0.0)) == 0.0
        assert prob_plus(BlochState(0, 0, 0.0, 0.0)) == 0.5

    def test_invalid_bloch(self):
        with pytest.raises(InvalidBloch):
            prob_plus(BlochState(0, 0, 1.1, 0.0))

    def test_tolerated_rounding_clamped(self):
        assert prob_plus(BlochState(0, 0, 1.0 + 5e-10, 0.0)) == 1.0
