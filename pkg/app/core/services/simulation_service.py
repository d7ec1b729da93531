import logging
import math
import time
from typing import Callable, Optional

import numpy as np

from app.core.control.backstepping import evaluate_proposed, lyapunov_value
from app.core.control.conventional import conventional_control, conventional_errors, conventional_lyapunov
from app.core.dynamics.auxiliary import cascade_rhs, g_delta
from app.core.dynamics.plant import eval_df, eval_dynamics, eval_f
from app.core.models.schemas import (
    FullState,
    RunStatus,
    ScenarioConfig,
    ShipKinematicState,
    TelemetryRecord,
    Trajectory,
)
from app.core.reference.references import Reference, build_reference, ensure_analytic
from app.core.services.actuators import saturated_actuator_step, servo_actuator_step
from app.core.services.integrators import make_rng, step_euler, step_euler_maruyama
from app.utils.exceptions import BoundaryViolation, NumericFailure, SteeringSimException
from app.utils.validators import ScenarioValidator

logger = logging.getLogger(__name__)

Integrator = Callable[[Callable[[np.ndarray], np.ndarray], np.ndarray], np.ndarray]


class SimulationService:
    """
    Fixed-step closed-loop simulation of one scenario.

    Features:
    - Proposed law on the tanh auxiliary cascade, or the conventional law with an
      ideal, saturated or first-order servo actuator
    - Euler or Euler-Maruyama integration with a seeded PCG64 stream
    - Guard trips and non-finite values end the run with a status instead of an exception
    """

    def __init__(self, config: ScenarioConfig, reference: Optional[Reference] = None):
        ScenarioValidator().validate_scenario(config)
        self.config = config
        self.model = config.plant
        self.control = config.control_config()
        self.reference = ensure_analytic(reference) if reference is not None else build_reference(config.reference)

    def initial_state(self) -> FullState:
        """Initial (psi, r, delta, xi); 'on_reference' places the ship on psi_d with matching rudder."""
        init = self.config.initial_state
        if init.mode == "explicit":
            return FullState(init.psi, init.r, init.delta, init.xi)

        ref = self.reference.sample(0.0)
        b = self.model.b
        delta = (ref.d2psi_d - eval_f(self.model, ref.dpsi_d)) / b
        xi = 0.0
        if self.config.controller.kind == "proposed":
            delta_dot = (ref.d3psi_d - eval_df(self.model, ref.dpsi_d) * ref.d2psi_d) / b
            xi = delta_dot / g_delta(self.control.limits, self.control.cascade, delta, self.control.guards)
        return FullState(ref.psi_d, ref.dpsi_d, delta, xi)

    def run(self) -> Trajectory:
        """
        Simulate the scenario over its horizon.

        Returns:
            Trajectory with one row per step, including both endpoints, and a termination status

        Raises:
            ConfigValidationError: If the scenario fails cross-field validation
        """
        sim = self.config.simulation
        n_steps = sim.n_steps
        data = np.full((n_steps + 1, len(TelemetryRecord._fields)), np.nan)
        started = time.perf_counter()

        logger.info(
            f"🚢 Running '{self.config.name}': controller={self.config.controller.kind}, "
            f"reference={self.config.reference.kind}, dt={sim.dt}, horizon={sim.horizon}s, method={sim.method}"
        )

        rng = make_rng(sim.seed)
        if sim.method == "euler_maruyama":
            def integrate(rhs, x):
                return step_euler_maruyama(rhs, x, sim.dt, sim.sigma, rng)
        else:
            def integrate(rhs, x):
                return step_euler(rhs, x, sim.dt)

        self._rows = 0
        status = RunStatus()
        try:
            x = self.initial_state().as_array()
            if self.config.controller.kind == "proposed":
                self._run_proposed(x, data, integrate)
            else:
                self._run_conventional(x, data, integrate)
        except BoundaryViolation as e:
            if e.t is None:
                e.t = 0.0
            status = RunStatus(kind="guard_violation", t=e.t, detail=e.describe())
            logger.warning(f"⚠️  '{self.config.name}': {e.describe()}")
        except NumericFailure as e:
            t = e.t if e.t is not None else 0.0
            status = RunStatus(kind="numeric_failure", t=t, detail=str(e))
            logger.error(f"❌ '{self.config.name}': numeric failure at t={t:.4f}s: {e}")
        except SteeringSimException:
            raise
        except Exception as e:
            logger.error(f"❌ '{self.config.name}': unexpected error after {self._rows} steps: {e}")
            raise SteeringSimException(f"simulation of '{self.config.name}' failed: {e}") from e

        rows = self._rows
        elapsed = time.perf_counter() - started
        if status.ok:
            logger.info(f"✅ '{self.config.name}' completed {rows} steps in {elapsed:.3f}s")

        return Trajectory(
            scenario=self.config.name,
            controller_kind=self.config.controller.kind,
            dt=sim.dt,
            data=data[:rows].copy(),
            status=status,
        )

    def _run_proposed(self, x: np.ndarray, data: np.ndarray, integrate: Integrator) -> None:
        model, control = self.model, self.control
        limits, cascade, guards = control.limits, control.cascade, control.guards
        dt = self.config.simulation.dt
        n_steps = data.shape[0] - 1

        for k in range(n_steps + 1):
            t = k * dt
            state = FullState.from_array(x)
            ref = self.reference.sample(t)
            try:
                out = evaluate_proposed(model, control, state, ref)
                self._assert_within_constraints(state, out.delta_dot, t)
            except (BoundaryViolation, NumericFailure) as e:
                e.t = t
                raise

            data[k] = (
                t, state.psi, ref.psi_d, state.r, state.delta, out.delta_dot, state.xi, out.eta,
                *out.z, lyapunov_value(out.z), out.margin_delta, out.margin_xi,
            )
            self._rows = k + 1
            if k == n_steps:
                break

            eta = out.eta

            def rhs(s: np.ndarray) -> np.ndarray:
                return np.array(cascade_rhs(model, limits, cascade, FullState.from_array(s), eta, guards))

            x = integrate(rhs, x)
            self._assert_finite(x, t + dt)

    def _run_conventional(self, x: np.ndarray, data: np.ndarray, integrate: Integrator) -> None:
        model, limits = self.model, self.control.limits
        gains = self.control.gains
        kind = self.config.controller.kind
        servo = self.config.servo
        dt = self.config.simulation.dt
        n_steps = data.shape[0] - 1
        delta_last = float(x[2])

        for k in range(n_steps + 1):
            t = k * dt
            ref = self.reference.sample(t)
            kinematic = ShipKinematicState(float(x[0]), float(x[1]))
            alpha = conventional_control(model, gains, kinematic, ref)
            if not math.isfinite(alpha):
                raise NumericFailure(f"conventional command is not finite ({alpha})", t=t)

            delta = alpha if kind == "conventional" else float(x[2])
            delta_dot = (delta - delta_last) / dt if k > 0 else 0.0
            e_psi, e_r = conventional_errors(gains, kinematic, ref)

            data[k] = (
                t, kinematic.psi, ref.psi_d, kinematic.r, delta, delta_dot, 0.0, alpha,
                e_psi, e_r, 0.0, 0.0, conventional_lyapunov(e_psi, e_r),
                1.0 - abs(delta) / limits.M, 1.0 - abs(delta_dot) / limits.R,
            )
            self._rows = k + 1
            if k == n_steps:
                break

            def rhs(s: np.ndarray, applied: float = delta) -> np.ndarray:
                return np.array([s[1], eval_dynamics(model, s[1], applied), 0.0, 0.0])

            x = integrate(rhs, x)
            if kind == "conventional-saturated":
                x[2] = saturated_actuator_step(delta, alpha, dt, limits)
            elif kind == "conventional-servo":
                x[2] = servo_actuator_step(delta, alpha, servo.T_R, servo.K_R, dt, limits)
            else:
                x[2] = alpha
            delta_last = delta
            self._assert_finite(x, t + dt)

    def _assert_within_constraints(self, state: FullState, delta_dot: float, t: float) -> None:
        limits = self.control.limits
        if not (abs(state.delta) < limits.M and abs(delta_dot) < limits.R):
            raise NumericFailure(
                f"constraint invariant broken: |delta|={abs(state.delta):.6g}, |delta_dot|={abs(delta_dot):.6g}",
                t=t,
            )

    @staticmethod
    def _assert_finite(x: np.ndarray, t: float) -> None:
        if not np.all(np.isfinite(x)):
            raise NumericFailure(f"state became non-finite: {x.tolist()}", t=t)


def run_scenario(config: ScenarioConfig) -> Trajectory:
    """Validate and simulate one scenario."""
    return SimulationService(config).run()
