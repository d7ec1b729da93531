"""Grid check of the necessary conditions for exact tracking under (M, R).

Exact tracking needs delta_d = (psi_d'' - f(psi_d'))/b and
delta_d' = (psi_d''' - f'(psi_d')*psi_d'')/b to stay within M and R.
The conditions are necessary only: a passing report does not rule out guard trips.
"""
import logging
from typing import Optional

import numpy as np

from app.core.dynamics.plant import eval_df, eval_f
from app.core.models.schemas import ConstraintLimits, FeasibilityReport, PlantModel
from app.core.reference.references import Reference

logger = logging.getLogger(__name__)


def required_rudder(reference: Reference, model: PlantModel, t: np.ndarray):
    """Rudder angle and rate an exactly tracking plant would need on the grid t."""
    _, rd, rd_dot, rd_ddot, _ = reference.sample_grid(t)
    delta_req = (rd_dot - eval_f(model, rd)) / model.b
    rate_req = (rd_ddot - eval_df(model, rd) * rd_dot) / model.b
    return delta_req, rate_req


def _first_violation(t: np.ndarray, demand: np.ndarray, limit: float) -> Optional[float]:
    over = np.flatnonzero(demand > limit)
    return float(t[over[0]]) if over.size else None


def _jump_demand(model: PlantModel, size: float, sample_dt: float):
    # A jump of size J over one grid step needs psi_d'' ~ J/h**2 and psi_d''' ~ J/h**3.
    return abs(size) / (abs(model.b) * sample_dt ** 2), abs(size) / (abs(model.b) * sample_dt ** 3)


def check_feasibility(
    reference: Reference,
    model: PlantModel,
    limits: ConstraintLimits,
    horizon: float,
    sample_dt: float
) -> FeasibilityReport:
    """
    Sample the required rudder angle and rate on [0, horizon] and compare them with (M, R).

    A heading jump inside the window fails both conditions; its margins are
    grid-resolution estimates that grow without bound as sample_dt shrinks.
    """
    if horizon <= 0 or sample_dt <= 0:
        raise ValueError("horizon and sample_dt must be positive")

    n = int(round(horizon / sample_dt))
    t = np.arange(n + 1) * sample_dt
    delta_req, rate_req = required_rudder(reference, model, t)
    magnitude = np.abs(delta_req)
    rate = np.abs(rate_req)

    i_mag = int(np.argmax(magnitude))
    i_rate = int(np.argmax(rate))
    worst_magnitude, worst_rate = float(magnitude[i_mag]), float(rate[i_rate])
    worst_times = [float(t[i_mag]), float(t[i_rate])]
    first_magnitude = _first_violation(t, magnitude, limits.M)
    first_rate = _first_violation(t, rate, limits.R)

    jumps = reference.jumps(float(t[0]), float(t[-1]))
    for t_jump, size in jumps:
        jump_magnitude, jump_rate = _jump_demand(model, size, sample_dt)
        if jump_magnitude > worst_magnitude:
            worst_magnitude, worst_times[0] = jump_magnitude, t_jump
        if jump_rate > worst_rate:
            worst_rate, worst_times[1] = jump_rate, t_jump
        first_magnitude = t_jump if first_magnitude is None else min(first_magnitude, t_jump)
        first_rate = t_jump if first_rate is None else min(first_rate, t_jump)

    report = FeasibilityReport(
        magnitude_ok=not jumps and worst_magnitude <= limits.M,
        rate_ok=not jumps and worst_rate <= limits.R,
        worst_margin_magnitude=limits.M - worst_magnitude,
        worst_margin_rate=limits.R - worst_rate,
        worst_times=worst_times,
        first_violation_magnitude=first_magnitude,
        first_violation_rate=first_rate,
        horizon=float(horizon),
        sample_dt=float(sample_dt),
    )
    logger.debug(
        f"Feasibility of {type(reference).__name__}: magnitude margin "
        f"{report.worst_margin_magnitude:.4g} deg, rate margin {report.worst_margin_rate:.4g} deg/s"
    )
    return report
