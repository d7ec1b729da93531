import numpy as np
import pytest

from app.core.control.backstepping import closed_loop_matrix
from app.core.models.schemas import ScenarioConfig, TelemetryRecord
from app.core.services.metrics import compute_metrics, fit_decay_rate
from app.core.services.simulation_service import SimulationService, run_scenario
from app.utils.exceptions import ConfigValidationError


def _with(config: ScenarioConfig, **simulation) -> ScenarioConfig:
    data = config.model_dump()
    data["simulation"].update(simulation)
    return ScenarioConfig.model_validate(data)


def _assert_constraints(trajectory, M=35.0, R=20.0):
    assert np.all(np.abs(trajectory.column("delta")) < M)
    assert np.all(np.abs(trajectory.column("delta_dot")) < R)


class TestCourseChanges:
    """Test cases for the tanh course changes under the proposed law."""

    @pytest.mark.parametrize("psi", [10, 20, 30, 40, 50])
    def test_course_change_within_limits(self, scenarios, psi):
        trajectory = run_scenario(scenarios.load(f"case1_psi{psi}"))

        assert trajectory.status.ok
        assert len(trajectory) == 10001
        _assert_constraints(trajectory)
        assert abs(trajectory.column("psi")[-1] - psi) < 0.1
        assert trajectory.column("t")[-1] == pytest.approx(100.0)

    def test_small_turn_from_rest(self, scenarios):
        trajectory = run_scenario(scenarios.load("case1_psi10_from_rest"))
        assert trajectory.status.ok
        _assert_constraints(trajectory)
        assert abs(trajectory.column("psi")[-1] - 10.0) < 0.1

    def test_logged_guard_margins_stay_positive(self, scenarios):
        frame = run_scenario(scenarios.load("case1_psi10_from_rest")).to_frame(include_margins=True)
        assert list(frame.columns[-2:]) == ["margin_delta", "margin_xi"]
        assert (frame["margin_delta"] > 1e-3).all()
        assert (frame["margin_xi"] > 1e-3).all()

    def test_nomoto_plant(self, scenarios):
        trajectory = run_scenario(scenarios.load("nomoto_case1"))
        assert trajectory.status.ok
        _assert_constraints(trajectory)

    def test_on_reference_start_has_zero_error(self, scenarios):
        trajectory = run_scenario(scenarios.load("case1_psi30"))
        first = trajectory.record(0)
        assert np.allclose([first.z1, first.z2, first.z3, first.z4], 0.0, atol=1e-9)

    def test_error_dynamics_follow_closed_loop_matrix(self, scenarios):
        """Forward differences of z approach (-C + S) z at first order in dt."""
        config = scenarios.load("case1_psi10_from_rest")
        a = closed_loop_matrix(config.controller.gains)
        columns = [TelemetryRecord._fields.index(n) for n in ("z1", "z2", "z3", "z4")]

        residuals = []
        for dt in (0.01, 0.005):
            trajectory = run_scenario(_with(config, dt=dt))
            assert trajectory.status.ok
            z = trajectory.data[:, columns]
            predicted = z[:-1] @ a.T
            measured = np.diff(z, axis=0) / dt
            assert float(np.max(np.abs(z))) > 0.1
            residuals.append(float(np.max(np.abs(measured - predicted))) / float(np.max(np.abs(predicted))))

        coarse, fine = residuals
        assert coarse < 0.5
        assert fine < 0.7 * coarse

    def test_equilibrium_stays_put(self, scenarios):
        trajectory = run_scenario(scenarios.load("constant"))
        assert trajectory.status.ok
        assert np.all(trajectory.column("delta_dot") == 0.0)
        assert np.all(trajectory.column("V") == 0.0)


class TestLyapunovDecay:
    """Test cases for the exponential decay of V."""

    def test_proposed_decay_rate(self, scenarios):
        trajectory = run_scenario(scenarios.load("decay_check"))
        V = trajectory.column("V")

        assert trajectory.status.ok
        assert np.all(np.diff(V) <= 1e-15)
        rate = fit_decay_rate(trajectory.column("t"), V)
        assert rate == pytest.approx(2.0, rel=0.05)

    def test_conventional_ideal_decay_rate(self, scenarios):
        trajectory = run_scenario(scenarios.load("conventional_ideal"))
        assert trajectory.status.ok
        assert compute_metrics(trajectory).decay_rate == pytest.approx(2.0, rel=0.05)
        assert np.all(trajectory.column("z3") == 0.0)


class TestGuardHandling:
    """Test cases for runs that reach the guard region."""

    def test_turn_from_rest_trips_guard(self, scenarios):
        trajectory = run_scenario(scenarios.load("guard_trip"))

        assert trajectory.status.kind == "guard_violation"
        assert trajectory.status.t is not None and trajectory.status.t < 1.0
        assert 0 < len(trajectory) < 10001
        assert trajectory.status.detail
        _assert_constraints(trajectory)

    def test_strong_noise_ends_gracefully(self, scenarios):
        trajectory = run_scenario(scenarios.load("case2"))

        assert trajectory.status.kind in ("completed", "guard_violation")
        _assert_constraints(trajectory)
        if not trajectory.status.ok:
            assert len(trajectory) == pytest.approx(trajectory.status.t / 0.01 + 1, abs=1)


class TestNoisyCourseKeeping:
    """Test cases for Euler-Maruyama runs."""

    def test_moderate_noise_is_rejected(self, scenarios):
        trajectory = run_scenario(scenarios.load("case2_moderate"))
        metrics = compute_metrics(trajectory)

        assert trajectory.status.ok
        _assert_constraints(trajectory)
        assert metrics.mean_abs_error_final_half < 5.0

    def test_same_seed_is_bitwise_reproducible(self, scenarios):
        config = scenarios.load("case2_moderate")
        assert np.array_equal(run_scenario(config).data, run_scenario(config).data)

    def test_different_seed_differs(self, scenarios):
        config = scenarios.load("case2_moderate")
        other = _with(config, seed=1)
        assert not np.array_equal(run_scenario(config).data, run_scenario(other).data)

    def test_noise_enters_yaw_rate_only(self, scenarios):
        noisy = _with(scenarios.load("case2_moderate"), horizon=0.01)
        quiet = _with(noisy, sigma=0.0)
        a, b = run_scenario(noisy).record(1), run_scenario(quiet).record(1)

        assert a.psi == b.psi and a.delta == b.delta and a.xi == b.xi
        assert a.r != b.r


class TestConventionalDegradation:
    """Test cases for the conventional law under actuator limits."""

    def test_saturated_law_oscillates(self, scenarios):
        trajectory = run_scenario(scenarios.load("degradation"))

        assert trajectory.status.ok
        assert compute_metrics(trajectory).sign_changes_final_half >= 3
        assert np.max(np.abs(trajectory.column("delta"))) <= 35.0

    def test_servo_law_oscillates(self, scenarios):
        trajectory = run_scenario(scenarios.load("conventional_servo"))
        assert compute_metrics(trajectory).sign_changes_final_half >= 3

    def test_proposed_law_settles_without_oscillation(self, scenarios):
        trajectory = run_scenario(scenarios.load("degradation_proposed"))
        metrics = compute_metrics(trajectory)

        assert trajectory.status.ok
        assert metrics.sign_changes_final_half == 0
        assert metrics.final_abs_error < 0.1


class TestValidation:
    """Test cases for scenario validation before simulation."""

    def test_noise_with_plain_euler_rejected(self, scenarios):
        config = _with(scenarios.load("case2_moderate"), method="euler")
        with pytest.raises(ConfigValidationError):
            SimulationService(config)

    def test_initial_rudder_outside_guard_rejected(self, scenarios):
        data = scenarios.load("guard_trip").model_dump()
        data["initial_state"]["delta"] = 40.0
        with pytest.raises(ConfigValidationError):
            SimulationService(ScenarioConfig.model_validate(data))

    def test_step_reference_rejected_for_proposed_law(self, scenarios):
        data = scenarios.load("degradation_proposed").model_dump()
        data["reference"] = {"kind": "step", "Psi_d": 50.0, "t_step": 0.0}
        with pytest.raises(ConfigValidationError, match="step"):
            SimulationService(ScenarioConfig.model_validate(data))

    def test_step_reference_accepted_for_conventional_law(self, scenarios):
        assert SimulationService(scenarios.load("degradation")).config.reference.kind == "step"


@pytest.mark.slow
class TestConvergence:
    """Euler global error against a fine-step solution."""

    def test_first_order(self, scenarios):
        base = scenarios.load("case1_psi10")

        def heading(dt):
            trajectory = run_scenario(_with(base, dt=dt, horizon=50.0))
            assert trajectory.status.ok
            return trajectory.column("psi")

        fine = heading(1e-4)
        coarse, medium = heading(0.01), heading(0.005)
        err_coarse = np.max(np.abs(coarse - fine[::100]))
        err_medium = np.max(np.abs(medium - fine[::50]))
        assert err_coarse / err_medium == pytest.approx(2.0, rel=0.2)


if __name__ == "__main__":
    pytest.main([__file__])
