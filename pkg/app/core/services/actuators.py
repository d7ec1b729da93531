"""Rudder actuator models used with the conventional law."""
from app.core.control.conventional import rate_limit, saturate_command
from app.core.models.schemas import ConstraintLimits


def servo_actuator_step(
    delta: float,
    delta_cmd: float,
    T_R: float,
    K_R: float,
    dt: float,
    limits: ConstraintLimits
) -> float:
    """Euler step of delta_dot = (K_R*delta_cmd - delta)/T_R, then magnitude and rate clips."""
    if T_R <= 0:
        raise ValueError("T_R must be positive")
    candidate = delta + dt * (K_R * delta_cmd - delta) / T_R
    candidate = saturate_command(candidate, limits.M)
    return rate_limit(delta, candidate, limits.R, dt)


def saturated_actuator_step(delta: float, delta_cmd: float, dt: float, limits: ConstraintLimits) -> float:
    """Magnitude clip of the command followed by a rate clip of the move."""
    return rate_limit(delta, saturate_command(delta_cmd, limits.M), limits.R, dt)
