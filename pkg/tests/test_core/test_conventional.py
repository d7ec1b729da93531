import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.core.control.conventional import (
    conventional_control,
    conventional_errors,
    conventional_lyapunov,
    rate_limit,
    saturate_command,
)
from app.core.dynamics.plant import eval_dynamics
from app.core.models.schemas import BacksteppingGains, ReferenceSample, ShipKinematicState

ZERO_REF = ReferenceSample(0.0, 0.0, 0.0, 0.0, 0.0)


class TestConventionalLaw:
    """Test cases for the unconstrained rudder-command law."""

    def test_heading_offset_example(self, norrbin_plant):
        alpha = conventional_control(norrbin_plant, BacksteppingGains(), ShipKinematicState(1.0, 0.0), ZERO_REF)
        assert alpha == pytest.approx(-83.81, abs=1e-2)

    def test_zero_at_origin(self, norrbin_plant):
        alpha = conventional_control(norrbin_plant, BacksteppingGains(), ShipKinematicState(0.0, 0.0), ZERO_REF)
        assert alpha == 0.0

    @given(
        psi=st.floats(min_value=-20.0, max_value=20.0),
        r=st.floats(min_value=-5.0, max_value=5.0),
        c1=st.floats(min_value=0.2, max_value=3.0),
        c2=st.floats(min_value=0.2, max_value=3.0),
    )
    def test_ideal_actuator_error_dynamics(self, norrbin_plant, psi, r, c1, c2):
        """Applying alpha exactly gives e_r' = -c2*e_r - e_psi."""
        gains = BacksteppingGains(c1=c1, c2=c2)
        ref = ReferenceSample(5.0, 0.3, -0.1, 0.0, 0.0)
        state = ShipKinematicState(psi, r)
        alpha = conventional_control(norrbin_plant, gains, state, ref)
        e_psi, e_r = conventional_errors(gains, state, ref)

        r_dot = eval_dynamics(norrbin_plant, r, alpha)
        e_r_dot = c1 * (r - ref.dpsi_d) + r_dot - ref.d2psi_d
        assert e_r_dot == pytest.approx(-c2 * e_r - e_psi, rel=1e-8, abs=1e-8)

    def test_lyapunov(self):
        assert conventional_lyapunov(1.0, 1.0) == 1.0
        assert conventional_lyapunov(0.0, 0.0) == 0.0


class TestSaturation:
    """Test cases for the magnitude and rate clips."""

    @pytest.mark.parametrize("value,expected", [(40.0, 35.0), (-10.0, -10.0), (-40.0, -35.0), (35.0, 35.0)])
    def test_saturate(self, value, expected):
        assert saturate_command(value, 35.0) == expected

    def test_rate_limit_example(self):
        assert rate_limit(0.0, 1.0, 20.0, 0.01) == pytest.approx(0.2)

    def test_rate_limit_passes_small_moves(self):
        assert rate_limit(1.0, 1.1, 20.0, 0.01) == pytest.approx(1.1)

    @given(
        prev=st.floats(min_value=-35.0, max_value=35.0),
        cmd=st.floats(min_value=-100.0, max_value=100.0),
    )
    def test_rate_limit_bounds_the_move(self, prev, cmd):
        assert abs(rate_limit(prev, cmd, 20.0, 0.01) - prev) <= 0.2 + 1e-12


if __name__ == "__main__":
    pytest.main([__file__])
