"""Backstepping tracking law for the constrained yaw cascade.

With e = psi - psi_d, e_v = r - psi_d', a = f(r) + b*delta - psi_d'' and
j = f'(r)*(f(r) + b*delta) + b*g_delta*xi - psi_d''' the error coordinates are

    z1 = e
    z2 = c1*e + e_v
    z3 = (c1*c2 + 1)*e + (c1 + c2)*e_v + a
    z4 = (c1 + c3 + c1*c2*c3)*e + (c1*c2 + c2*c3 + c3*c1 + 2)*e_v + (c1 + c2 + c3)*a + j

and the control eta renders z_dot = (-C + S) z, C = diag(c), S skew with +1 on
the superdiagonal. V = z.z/2 then satisfies V_dot = -z'Cz.
"""
import math
from typing import NamedTuple

import numpy as np

from app.core.dynamics.auxiliary import check_delta, check_xi, dg_delta, f_xi, g_delta, g_xi
from app.core.dynamics.plant import eval_d2f, eval_df, eval_f
from app.core.models.schemas import (
    BacksteppingGains,
    ControlConfig,
    ErrorVector,
    FullState,
    PlantModel,
    ReferenceSample,
)
from app.utils.exceptions import BoundaryViolation, NumericFailure


class ControlTerms(NamedTuple):
    """Intermediate quantities shared by the error vector and the control law."""

    e: float
    ev: float
    a: float
    j: float
    accel: float
    f: float
    df: float
    d2f: float
    g_delta: float
    dg_delta: float
    g_xi: float
    f_xi: float
    margin_delta: float
    margin_xi: float


class ControlOutput(NamedTuple):
    eta: float
    z: ErrorVector
    delta_dot: float
    margin_delta: float
    margin_xi: float


def control_terms(
    model: PlantModel,
    config: ControlConfig,
    state: FullState,
    ref: ReferenceSample
) -> ControlTerms:
    limits, cascade, guards = config.limits, config.cascade, config.guards
    psi, r, delta, xi = state

    margin_delta = check_delta(limits, delta, guards)
    margin_xi = check_xi(limits, cascade, delta, xi, guards)
    gd = g_delta(limits, cascade, delta, guards)
    gx = g_xi(limits, cascade, delta, xi, guards)

    f = eval_f(model, r)
    df = eval_df(model, r)
    accel = f + model.b * delta
    return ControlTerms(
        e=psi - ref.psi_d,
        ev=r - ref.dpsi_d,
        a=accel - ref.d2psi_d,
        j=df * accel + model.b * gd * xi - ref.d3psi_d,
        accel=accel,
        f=f,
        df=df,
        d2f=eval_d2f(model, r),
        g_delta=gd,
        dg_delta=dg_delta(limits, cascade, delta),
        g_xi=gx,
        f_xi=f_xi(limits, cascade, delta, xi, guards),
        margin_delta=margin_delta,
        margin_xi=margin_xi,
    )


def _z_from_terms(gains: BacksteppingGains, terms: ControlTerms) -> ErrorVector:
    c1, c2, c3 = gains.c1, gains.c2, gains.c3
    e, ev, a, j = terms.e, terms.ev, terms.a, terms.j
    return ErrorVector(
        z1=e,
        z2=c1 * e + ev,
        z3=(c1 * c2 + 1.0) * e + (c1 + c2) * ev + a,
        z4=(c1 + c3 + c1 * c2 * c3) * e
        + (c1 * c2 + c2 * c3 + c3 * c1 + 2.0) * ev
        + (c1 + c2 + c3) * a
        + j,
    )


def drift_terms(model: PlantModel, state: FullState, ref: ReferenceSample, terms: ControlTerms) -> float:
    """Part of d(j)/dt that does not depend on eta.

    f''*(f + b*delta)**2 + f'*(f'*(f + b*delta) + b*g_delta*xi)
    + b*(g_delta'*g_delta*xi**2 + g_delta*f_xi) - psi_d''''
    """
    xi = state.xi
    b = model.b
    return (
        terms.d2f * terms.accel ** 2
        + terms.df * (terms.df * terms.accel + b * terms.g_delta * xi)
        + b * (terms.dg_delta * terms.g_delta * xi * xi + terms.g_delta * terms.f_xi)
        - ref.d4psi_d
    )


def error_vector(
    model: PlantModel,
    config: ControlConfig,
    state: FullState,
    ref: ReferenceSample
) -> ErrorVector:
    """Backstepping error coordinates z1..z4."""
    return _z_from_terms(config.gains, control_terms(model, config, state, ref))


def evaluate_proposed(
    model: PlantModel,
    config: ControlConfig,
    state: FullState,
    ref: ReferenceSample
) -> ControlOutput:
    """
    Evaluate the error vector and the control eta in one pass.

    Args:
        model: Plant parameters
        config: Limits, cascade gains, backstepping gains, guard margins and output cap
        state: Current (psi, r, delta, xi)
        ref: Reference heading and its first four derivatives

    Returns:
        ControlOutput with eta, z, the analytic rudder rate g_delta*xi and guard margins

    Raises:
        BoundaryViolation: (delta, xi) outside the guard region, or eta / 1/(b g_delta g_xi)
            above the configured cap
        NumericFailure: eta is not finite
    """
    terms = control_terms(model, config, state, ref)
    z = _z_from_terms(config.gains, terms)
    gains = config.gains
    c1, c2, c3, c4 = gains.c1, gains.c2, gains.c3, gains.c4

    phi = (
        (c1 + c3 + c1 * c2 * c3) * terms.ev
        + (c1 * c2 + c2 * c3 + c3 * c1 + 2.0) * terms.a
        + (c1 + c2 + c3) * terms.j
        + drift_terms(model, state, ref, terms)
    )

    input_gain = model.b * terms.g_delta * terms.g_xi
    cap = config.control_cap
    if input_gain == 0.0 or abs(1.0 / input_gain) > cap:
        raise BoundaryViolation(
            f"1/(b*g_delta*g_xi) exceeds the control cap {cap:g}",
            quantity="control_gain", delta=state.delta, xi=state.xi,
            margin=min(terms.margin_delta, terms.margin_xi),
        )

    eta = (-c4 * z.z4 - z.z3 - phi) / input_gain
    if not math.isfinite(eta):
        raise NumericFailure(f"control output is not finite (eta={eta})")
    if abs(eta) > cap:
        raise BoundaryViolation(
            f"|eta|={abs(eta):.6g} exceeds the control cap {cap:g}",
            quantity="eta", delta=state.delta, xi=state.xi,
            margin=min(terms.margin_delta, terms.margin_xi),
        )

    return ControlOutput(
        eta=eta,
        z=z,
        delta_dot=terms.g_delta * state.xi,
        margin_delta=terms.margin_delta,
        margin_xi=terms.margin_xi,
    )


def proposed_control(
    model: PlantModel,
    config: ControlConfig,
    state: FullState,
    ref: ReferenceSample
) -> float:
    """Control input eta of the auxiliary cascade."""
    return evaluate_proposed(model, config, state, ref).eta


def lyapunov_value(z: ErrorVector) -> float:
    return 0.5 * float(np.dot(z, z))


def skew_coupling(n: int = 4) -> np.ndarray:
    """S with +1 on the superdiagonal and -1 on the subdiagonal."""
    return np.eye(n, k=1) - np.eye(n, k=-1)


def closed_loop_matrix(gains: BacksteppingGains) -> np.ndarray:
    """Error-dynamics generator A = -C + S."""
    return -np.diag(gains.as_array()) + skew_coupling(4)

