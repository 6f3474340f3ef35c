"""Monte-Carlo ensemble integrator and its agreement report."""

import numpy as np
import pytest

from cavent.dynamics import UnstableDrift, build_diffusion, build_drift
from cavent.gaussian import solve_lyapunov
from cavent.oracle import (EnsembleEstimate, StepTooLarge, compare_cm,
                           simulate_ensemble, suggested_times)
from cavent.params import derive_rates
from cavent.steadystate import solve_steady_state

from conftest import zero_coupling_config


def _ou_system():
    return np.array([[-1.0]]), np.array([[2.0]])


class TestSimulateEnsemble:
    def test_ou_stationary_variance(self):
        A, D = _ou_system()
        est = simulate_ensemble(A, D, dt=0.05, t_end=12.0, n_traj=4000,
                                seed=7, method="euler")
        assert abs(est.cov[0, 0] - 1.0) < 5.0 * est.stderr[0, 0]
        # initial condition u(0) = 0 has decayed
        assert abs(est.mean[0]) < 5.0 * np.sqrt(est.cov[0, 0] / est.n_traj)

    def test_identity_system_euler(self):
        A = -np.eye(8)
        D = 2.0 * np.eye(8)
        dt, t_end = suggested_times(A, "euler")
        est = simulate_ensemble(A, D, dt=dt, t_end=t_end, n_traj=2000,
                                seed=3, method="euler")
        rep = compare_cm(np.eye(8), est)
        assert rep["pass"], rep

    def test_exact_method_on_stiff_physical_system(self):
        # damping rates span 1e2..1e13 rad/s; euler cannot touch this, the
        # exact one-step discretization can
        r = derive_rates(zero_coupling_config())
        state = solve_steady_state(r)
        A = build_drift(r, state)
        D = build_diffusion(r, 0.1)
        V = solve_lyapunov(A, D)
        dt, t_end = suggested_times(A, "exact")
        est = simulate_ensemble(A, D, dt=dt, t_end=t_end, n_traj=2000,
                                seed=5, method="exact")
        rep = compare_cm(V, est)
        assert rep["pass"], rep

    def test_exact_single_step_is_unbiased(self):
        # one step of length t_end must already sample N(0, V(t_end))
        A, D = -np.eye(8), 2.0 * np.eye(8)
        t = 12.0
        est = simulate_ensemble(A, D, dt=t, t_end=t, n_traj=3000, seed=13,
                                method="exact")
        V_t = (1.0 - np.exp(-2.0 * t)) * np.eye(8)
        rep = compare_cm(V_t, est)
        assert rep["pass"], rep

    def test_bit_identical_reruns(self):
        A, D = _ou_system()
        a = simulate_ensemble(A, D, dt=0.05, t_end=12.0, n_traj=500, seed=42,
                              method="euler")
        b = simulate_ensemble(A, D, dt=0.05, t_end=12.0, n_traj=500, seed=42,
                              method="euler")
        assert np.array_equal(a.cov, b.cov)
        assert np.array_equal(a.mean, b.mean)
        assert np.array_equal(a.stderr, b.stderr)

    def test_seed_changes_estimate(self):
        # note: seeds differing only in bits below n_traj can XOR-permute the
        # same stream set, and the sample covariance is permutation-invariant;
        # distinct estimates are only guaranteed for far-apart seeds
        A, D = _ou_system()
        a = simulate_ensemble(A, D, dt=0.05, t_end=12.0, n_traj=500, seed=0,
                              method="euler")
        b = simulate_ensemble(A, D, dt=0.05, t_end=12.0, n_traj=500,
                              seed=1000003, method="euler")
        assert a.cov[0, 0] != b.cov[0, 0]

    def test_halving_dt_stays_within_noise(self):
        A, D = _ou_system()
        a = simulate_ensemble(A, D, dt=0.05, t_end=12.0, n_traj=4000, seed=7,
                              method="euler")
        b = simulate_ensemble(A, D, dt=0.025, t_end=12.0, n_traj=4000, seed=7,
                              method="euler")
        assert abs(a.cov[0, 0] - b.cov[0, 0]) < \
            5.0 * (a.stderr[0, 0] + b.stderr[0, 0])

    def test_t_end_rounded_to_whole_steps(self):
        A, D = _ou_system()
        est = simulate_ensemble(A, D, dt=0.07, t_end=11.0, n_traj=8, seed=0,
                                method="euler")
        n_steps = est.t_end / est.dt
        assert n_steps == pytest.approx(round(n_steps))
        assert est.t_end >= 11.0 - 1e-9


class TestPreconditions:
    def test_euler_step_cap(self):
        A, D = _ou_system()
        with pytest.raises(StepTooLarge):
            simulate_ensemble(A, D, dt=0.2, t_end=12.0, n_traj=8, seed=0,
                              method="euler")

    def test_exact_method_has_no_step_cap(self):
        A, D = _ou_system()
        est = simulate_ensemble(A, D, dt=3.0, t_end=12.0, n_traj=256, seed=0,
                                method="exact")
        assert np.isfinite(est.cov).all()

    def test_unstable_drift_refused(self):
        with pytest.raises(UnstableDrift):
            simulate_ensemble(np.eye(2), np.eye(2), dt=0.01, t_end=100.0,
                              n_traj=8, seed=0)
        with pytest.raises(UnstableDrift):
            suggested_times(np.eye(2))

    def test_settling_contract(self):
        A, D = _ou_system()
        with pytest.raises(ValueError, match="settling"):
            simulate_ensemble(A, D, dt=0.05, t_end=1.0, n_traj=8, seed=0)

    def test_unknown_method(self):
        A, D = _ou_system()
        with pytest.raises(ValueError, match="method"):
            simulate_ensemble(A, D, dt=0.05, t_end=12.0, n_traj=8, seed=0,
                              method="heun")

    def test_suggested_times_meet_own_contracts(self):
        A = -np.eye(8)
        dt, t_end = suggested_times(A, "euler")
        assert dt <= 0.1 / 1.0 and t_end >= 10.0
        dt2, t_end2 = suggested_times(A, "exact")
        assert t_end2 == t_end and dt2 == pytest.approx(t_end / 1000.0)


class TestCompareCm:
    def _est(self, cov, stderr):
        n = cov.shape[0]
        return EnsembleEstimate(mean=np.zeros(n), cov=cov, stderr=stderr,
                                n_traj=100, t_end=1.0, dt=0.1, seed=0,
                                method="euler")

    def test_exact_match_with_zero_stderr_passes(self):
        V = np.diag([1.0, 2.0])
        rep = compare_cm(V, self._est(V.copy(), np.zeros((2, 2))))
        assert rep["pass"] and rep["max_z"] == 0.0

    def test_mismatch_with_zero_stderr_fails(self):
        V = np.diag([1.0, 2.0])
        rep = compare_cm(V, self._est(V + 1.0, np.zeros((2, 2))))
        assert not rep["pass"] and rep["max_z"] == np.inf

    def test_doubled_covariance_fails(self):
        V = np.diag([1.0, 2.0])
        rep = compare_cm(V, self._est(2.0 * V, 1e-6 * np.ones((2, 2))))
        assert not rep["pass"]
        assert rep["max_rel"] == pytest.approx(1.0)

    def test_small_deviation_passes(self):
        V = np.eye(2)
        rep = compare_cm(V, self._est(V + 1e-3, 1e-3 * np.ones((2, 2))))
        assert rep["pass"] and rep["max_z"] == pytest.approx(1.0)
