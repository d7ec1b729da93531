"""Conventional backstepping heading law and the saturation wrappers used with it.

The law commands the rudder angle directly:

    e_psi = psi - psi_d,   e_r = c1*e_psi + (r - psi_d')
    alpha_delta = (-c2*e_r - e_psi - (f(r) + c1*(r - psi_d') - psi_d'')) / b

With an ideal actuator this gives e_r' = -c2*e_r - e_psi and
V_e = (e_psi**2 + e_r**2)/2 decays as V_e' = -c1*e_psi**2 - c2*e_r**2.
"""
import math
from typing import Tuple

from app.core.dynamics.plant import eval_f
from app.core.models.schemas import BacksteppingGains, PlantModel, ReferenceSample, ShipKinematicState


def conventional_errors(
    gains: BacksteppingGains,
    state: ShipKinematicState,
    ref: ReferenceSample
) -> Tuple[float, float]:
    """(e_psi, e_r)."""
    e_psi = state.psi - ref.psi_d
    return e_psi, gains.c1 * e_psi + (state.r - ref.dpsi_d)


def conventional_control(
    model: PlantModel,
    gains: BacksteppingGains,
    state: ShipKinematicState,
    ref: ReferenceSample
) -> float:
    """Unconstrained rudder command alpha_delta [deg]."""
    e_psi, e_r = conventional_errors(gains, state, ref)
    feedforward = eval_f(model, state.r) + gains.c1 * (state.r - ref.dpsi_d) - ref.d2psi_d
    return (-gains.c2 * e_r - e_psi - feedforward) / model.b


def conventional_lyapunov(e_psi: float, e_r: float) -> float:
    return 0.5 * (e_psi * e_psi + e_r * e_r)


def saturate_command(value: float, limit: float) -> float:
    """sat(s, s_bar): s inside [-s_bar, s_bar], sign(s)*s_bar outside."""
    if abs(value) <= limit:
        return value
    return math.copysign(limit, value)


def rate_limit(prev_delta: float, commanded_delta: float, R: float, dt: float) -> float:
    """Move from prev_delta toward commanded_delta by at most R*dt."""
    return prev_delta + saturate_command(commanded_delta - prev_delta, R * dt)
