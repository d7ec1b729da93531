from typing import List
import logging

from app.core.models.schemas import ScenarioConfig
from app.utils.exceptions import ConfigValidationError

logger = logging.getLogger(__name__)


class ScenarioValidator:
    """Cross-field checks on a scenario that single-field validation cannot express."""

    def __init__(self, step_tolerance: float = 1e-9):
        self.step_tolerance = step_tolerance

    def validate_scenario(self, config: ScenarioConfig) -> None:
        """Raise ConfigValidationError listing every problem found."""
        errors: List[str] = []

        sim = config.simulation
        kind = config.controller.kind

        steps = sim.horizon / sim.dt
        if abs(steps - round(steps)) > self.step_tolerance * max(1.0, steps):
            errors.append(
                f"simulation.horizon ({sim.horizon}) must be a whole number of steps of simulation.dt ({sim.dt})"
            )

        if sim.method == "euler" and sim.sigma > 0:
            errors.append("simulation.sigma > 0 requires simulation.method 'euler_maruyama'")

        if kind == "conventional-servo" and config.servo is None:
            errors.append("controller.kind 'conventional-servo' requires a 'servo' section")

        if kind != "conventional-servo" and config.servo is not None:
            errors.append(f"servo section is only used by 'conventional-servo', not '{kind}'")

        if kind == "proposed" and config.reference.kind == "step":
            errors.append("reference.kind 'step' has no derivatives through the jump; the proposed controller needs a smooth reference")

        init = config.initial_state
        if init.mode == "explicit":
            M = config.limits.M
            if kind == "proposed":
                if abs(init.delta) >= M * (1.0 - config.guards.eps_delta):
                    errors.append(f"initial_state.delta ({init.delta}) is outside the rudder guard region")
                else:
                    span = M * M - init.delta * init.delta
                    bound = M * config.limits.R / (config.cascade.k_delta * span)
                    if abs(init.xi) >= bound * (1.0 - config.guards.eps_xi):
                        errors.append(f"initial_state.xi ({init.xi}) is outside the rate guard region")
            elif abs(init.delta) > M:
                errors.append(f"initial_state.delta ({init.delta}) exceeds limits.M ({M})")
            if kind != "proposed" and init.xi != 0.0:
                errors.append("initial_state.xi is only meaningful for the proposed controller")

        if errors:
            raise ConfigValidationError(f"Scenario '{config.name}' is invalid: {'; '.join(errors)}")

        logger.debug(f"Scenario '{config.name}' passed cross-field validation")
