import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.core.models.schemas import (
    ConstantReferenceSpec,
    SineReferenceSpec,
    StepReferenceSpec,
    TanhReferenceSpec,
)
from app.core.reference.references import (
    ConstantReference,
    Reference,
    SineReference,
    StepReference,
    TanhReference,
    build_reference,
    constant_reference,
    ensure_analytic,
    sample,
)
from app.utils.exceptions import InvalidReferenceError

headings = st.floats(min_value=5.0, max_value=60.0)


def _derivative_scale(reference, order):
    """Largest magnitude of the given derivative order over the horizon."""
    grid = reference.sample_grid(np.linspace(0.0, 100.0, 20001))
    return float(np.max(np.abs(grid[order])))


class TestTanhReference:
    """Test cases for the smooth heading change."""

    def test_default_shape_parameters(self):
        reference = TanhReference(10.0)
        assert reference.t_tanh == pytest.approx(8.0)
        assert reference.d_tanh == pytest.approx(4.0)

    def test_midpoint(self):
        reference = TanhReference(30.0)
        assert sample(reference, reference.t_tanh).psi_d == pytest.approx(15.0)

    def test_endpoints(self):
        reference = TanhReference(50.0)
        assert 0.0 < reference.sample(0.0).psi_d < 0.05 * 50.0
        assert reference.sample(100.0).psi_d == pytest.approx(50.0, abs=1e-4)

    def test_peak_rate(self):
        """max psi_d' = Psi_d/(2*d_tanh), attained at t_tanh."""
        reference = TanhReference(40.0)
        assert reference.sample(reference.t_tanh).dpsi_d == pytest.approx(40.0 / (2 * reference.d_tanh))
        scale = _derivative_scale(reference, 1)
        assert scale == pytest.approx(40.0 / (2 * reference.d_tanh), rel=1e-6)

    def test_odd_derivatives_vanish_at_midpoint_even_ones(self):
        ref = TanhReference(20.0).sample(11.0)
        assert ref.d2psi_d == pytest.approx(0.0, abs=1e-12)
        assert ref.d4psi_d == pytest.approx(0.0, abs=1e-12)

    @given(psi=headings, t=st.floats(min_value=0.0, max_value=100.0))
    @settings(max_examples=200)
    def test_derivatives_match_finite_differences(self, psi, t):
        reference = TanhReference(psi)
        h = 1e-4
        lo = np.array(reference.sample(t - h))
        hi = np.array(reference.sample(t + h))
        mid = np.array(reference.sample(t))
        fd = (hi[:-1] - lo[:-1]) / (2 * h)
        for order in range(1, 5):
            tol = 1e-6 * max(abs(mid[order]), _derivative_scale(reference, order))
            assert abs(fd[order - 1] - mid[order]) <= tol

    def test_grid_agrees_with_pointwise_samples(self):
        reference = TanhReference(25.0)
        t = np.array([0.0, 3.3, 12.5, 80.0])
        grid = reference.sample_grid(t)
        for i, ti in enumerate(t):
            assert grid[:, i] == pytest.approx(np.array(reference.sample(ti)), rel=1e-12, abs=1e-15)

    def test_port_turn_uses_magnitude_for_defaults(self):
        port, starboard = TanhReference(-20.0), TanhReference(20.0)
        assert (port.t_tanh, port.d_tanh) == pytest.approx((11.0, 5.5))
        assert port.sample(30.0).psi_d == pytest.approx(-starboard.sample(30.0).psi_d)
        assert port.jumps(0.0, 100.0) == []

    def test_width_must_be_positive(self):
        with pytest.raises(InvalidReferenceError):
            TanhReference(10.0, d_tanh=0.0)


class TestOtherReferences:
    """Test cases for constant, sine and step references."""

    def test_constant(self):
        ref = constant_reference(3.0).sample(42.0)
        assert ref == (3.0, 0.0, 0.0, 0.0, 0.0)

    def test_sine_derivatives(self):
        reference = SineReference(amplitude=5.0, omega=5.0)
        ref = reference.sample(0.0)
        assert ref.psi_d == pytest.approx(0.0, abs=1e-12)
        assert ref.dpsi_d == pytest.approx(25.0)
        assert ref.d2psi_d == pytest.approx(0.0, abs=1e-9)
        assert ref.d3psi_d == pytest.approx(-625.0)

    def test_step(self):
        reference = StepReference(50.0, t_step=1.0)
        assert reference.sample(0.5).psi_d == 0.0
        assert reference.sample(1.0).psi_d == 50.0
        assert reference.sample(1.0).dpsi_d == 0.0

    def test_step_reports_jump_inside_window(self):
        reference = StepReference(50.0, t_step=1.0)
        assert reference.jumps(0.0, 100.0) == [(1.0, 50.0)]
        assert reference.jumps(2.0, 100.0) == []
        assert StepReference(0.0, t_step=1.0).jumps(0.0, 100.0) == []

    @pytest.mark.parametrize(
        "spec,expected",
        [
            (TanhReferenceSpec(Psi_d=10.0), TanhReference),
            (ConstantReferenceSpec(psi0=1.0), ConstantReference),
            (SineReferenceSpec(amplitude=5.0, omega=5.0), SineReference),
            (StepReferenceSpec(Psi_d=50.0), StepReference),
        ],
    )
    def test_build_reference(self, spec, expected):
        assert isinstance(build_reference(spec), expected)

    def test_non_analytic_reference_refused(self):
        class Tabulated(Reference):
            analytic = False

            def sample(self, t):
                raise NotImplementedError

        with pytest.raises(InvalidReferenceError):
            ensure_analytic(Tabulated())
        with pytest.raises(InvalidReferenceError):
            ensure_analytic(object())


if __name__ == "__main__":
    pytest.main([__file__])
