"""Tanh auxiliary cascade encoding the rudder magnitude and rate constraints.

The rudder angle is parameterised as delta = M*tanh(k_delta*delta_tilde) and the
auxiliary rate xi = d(delta_tilde)/dt as xi = xi_bound(delta)*tanh(k_xi*xi_tilde).
Differentiating gives the constraint-free cascade

    delta_dot = g_delta(delta) * xi
    xi_dot    = f_xi(delta, xi) + g_xi(delta, xi) * eta

in which |delta| < M and |delta_dot| < R hold by construction. The state is
(delta, xi); delta_tilde and xi_tilde are never integrated.

Every function that divides by (M**2 - delta**2) or by the distance to the
rate bound checks the guard region first and raises BoundaryViolation.
"""
import math
from functools import lru_cache
from typing import Optional

from app.core.dynamics.plant import eval_dynamics
from app.core.models.schemas import (
    CascadeGains,
    ConstraintLimits,
    FullState,
    GuardMargins,
    PlantModel,
)
from app.utils.exceptions import BoundaryViolation


@lru_cache(maxsize=1)
def _default_guards() -> GuardMargins:
    return GuardMargins()


def _guards(guards: Optional[GuardMargins]) -> GuardMargins:
    return guards if guards is not None else _default_guards()


def check_delta(limits: ConstraintLimits, delta: float, guards: Optional[GuardMargins] = None) -> float:
    """Return the relative margin 1 - |delta|/M, raising when it falls to eps_delta."""
    eps = _guards(guards).eps_delta
    margin = 1.0 - abs(delta) / limits.M
    if not margin > eps:
        raise BoundaryViolation(
            f"|delta|={abs(delta):.6g} reached the magnitude guard M*(1-{eps:g})",
            quantity="delta", delta=delta, margin=margin,
        )
    return margin


def check_xi(
    limits: ConstraintLimits,
    gains: CascadeGains,
    delta: float,
    xi: float,
    guards: Optional[GuardMargins] = None
) -> float:
    """Return the relative margin 1 - |xi|/xi_bound(delta), raising when it falls to eps_xi."""
    bound = xi_bound(limits, gains, delta, guards)
    eps = _guards(guards).eps_xi
    margin = 1.0 - abs(xi) / bound
    if not margin > eps:
        raise BoundaryViolation(
            f"|xi|={abs(xi):.6g} reached the rate guard xi_bound*(1-{eps:g}) with xi_bound={bound:.6g}",
            quantity="xi", delta=delta, xi=xi, margin=margin,
        )
    return margin


def g_delta(
    limits: ConstraintLimits,
    gains: CascadeGains,
    delta: float,
    guards: Optional[GuardMargins] = None
) -> float:
    """k_delta*(M**2 - delta**2)/M, the gain from xi to delta_dot."""
    check_delta(limits, delta, guards)
    M = limits.M
    return gains.k_delta * (M * M - delta * delta) / M


def dg_delta(limits: ConstraintLimits, gains: CascadeGains, delta: float) -> float:
    """d(g_delta)/d(delta) = -2*k_delta*delta/M."""
    return -2.0 * gains.k_delta * delta / limits.M


def xi_bound(
    limits: ConstraintLimits,
    gains: CascadeGains,
    delta: float,
    guards: Optional[GuardMargins] = None
) -> float:
    """Largest admissible |xi| at this rudder angle, M*R/(k_delta*(M**2 - delta**2)) = R/g_delta."""
    check_delta(limits, delta, guards)
    M = limits.M
    return M * limits.R / (gains.k_delta * (M * M - delta * delta))


def f_xi(
    limits: ConstraintLimits,
    gains: CascadeGains,
    delta: float,
    xi: float,
    guards: Optional[GuardMargins] = None
) -> float:
    """Drift of the auxiliary rate state, 2*k_delta*delta*xi**2/M."""
    check_xi(limits, gains, delta, xi, guards)
    return 2.0 * gains.k_delta * delta * xi * xi / limits.M


def g_xi(
    limits: ConstraintLimits,
    gains: CascadeGains,
    delta: float,
    xi: float,
    guards: Optional[GuardMargins] = None
) -> float:
    """Input gain of the auxiliary rate state; vanishes on the rate boundary."""
    check_xi(limits, gains, delta, xi, guards)
    M, R = limits.M, limits.R
    span = M * M - delta * delta
    bound = M * R / (gains.k_delta * span)
    return (gains.k_delta * gains.k_xi * span / (M * R)) * (bound * bound - xi * xi)


def cascade_rhs(
    model: PlantModel,
    limits: ConstraintLimits,
    gains: CascadeGains,
    state: FullState,
    eta: float,
    guards: Optional[GuardMargins] = None
) -> FullState:
    """Time derivative (psi_dot, r_dot, delta_dot, xi_dot) of the full cascade."""
    psi, r, delta, xi = state
    gd = g_delta(limits, gains, delta, guards)
    gx = g_xi(limits, gains, delta, xi, guards)
    return FullState(
        psi=r,
        r=eval_dynamics(model, r, delta),
        delta=gd * xi,
        xi=f_xi(limits, gains, delta, xi, guards) + gx * eta,
    )


def delta_tilde_from_delta(limits: ConstraintLimits, gains: CascadeGains, delta: float) -> float:
    """Inverse of delta = M*tanh(k_delta*delta_tilde)."""
    if abs(delta) >= limits.M:
        raise BoundaryViolation(
            f"|delta|={abs(delta):.6g} is outside the open interval (-M, M)",
            quantity="delta", delta=delta, margin=1.0 - abs(delta) / limits.M,
        )
    return math.atanh(delta / limits.M) / gains.k_delta


def delta_from_delta_tilde(limits: ConstraintLimits, gains: CascadeGains, delta_tilde: float) -> float:
    return limits.M * math.tanh(gains.k_delta * delta_tilde)
