import pytest

from app.core.services.actuators import saturated_actuator_step, servo_actuator_step


class TestServoActuator:
    """Test cases for the first-order rudder servo."""

    def test_single_step_example(self, limits):
        assert servo_actuator_step(0.0, 20.0, T_R=1.0, K_R=1.0, dt=0.01, limits=limits) == pytest.approx(0.2)

    def test_fixed_point(self, limits):
        assert servo_actuator_step(10.0, 10.0, T_R=2.0, K_R=1.0, dt=0.01, limits=limits) == 10.0

    def test_converges_within_five_time_constants(self, limits):
        delta, T_R, dt = 0.0, 1.0, 0.01
        for _ in range(int(5 * T_R / dt)):
            delta = servo_actuator_step(delta, 10.0, T_R=T_R, K_R=1.0, dt=dt, limits=limits)
        assert delta == pytest.approx(10.0, rel=0.01)

    def test_rate_clip_applies(self, limits):
        """A fast servo chasing a large command moves at most R*dt per step."""
        delta = servo_actuator_step(0.0, 30.0, T_R=0.01, K_R=1.0, dt=0.01, limits=limits)
        assert delta == pytest.approx(0.2)

    def test_non_positive_time_constant_rejected(self, limits):
        with pytest.raises(ValueError):
            servo_actuator_step(0.0, 1.0, T_R=0.0, K_R=1.0, dt=0.01, limits=limits)


class TestSaturatedActuator:
    """Test cases for the magnitude-and-rate clipped actuator."""

    def test_large_command_clipped(self, limits):
        assert saturated_actuator_step(0.0, 100.0, 0.01, limits) == pytest.approx(0.2)

    def test_never_leaves_magnitude_limit(self, limits):
        delta = 34.9
        for _ in range(10):
            delta = saturated_actuator_step(delta, 100.0, 0.01, limits)
        assert delta == 35.0


if __name__ == "__main__":
    pytest.main([__file__])
