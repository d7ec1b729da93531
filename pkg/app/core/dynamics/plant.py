"""Norrbin / Nomoto yaw dynamics.

    psi_dot = r
    r_dot   = f(r) + b*delta,   f(r) = -H(r)/T,   b = K/T

with H(r) = n3*r**3 + n2*r**2 + n1*r + n0 (Norrbin) or H(r) = r (Nomoto).
Angles are in degrees and rates in deg/s throughout.
"""
from app.core.models.schemas import PlantModel


def _polynomial(model: PlantModel):
    if model.kind == "nomoto":
        return 0.0, 1.0, 0.0, 0.0
    return model.n0, model.n1, model.n2, model.n3


def eval_f(model: PlantModel, r: float) -> float:
    """f(r) [deg/s^2]."""
    n0, n1, n2, n3 = _polynomial(model)
    return -(((n3 * r + n2) * r + n1) * r + n0) / model.T


def eval_df(model: PlantModel, r: float) -> float:
    """df/dr [1/s]."""
    _, n1, n2, n3 = _polynomial(model)
    return -((3.0 * n3 * r + 2.0 * n2) * r + n1) / model.T


def eval_d2f(model: PlantModel, r: float) -> float:
    """d2f/dr2 [1/(deg s)]."""
    _, _, n2, n3 = _polynomial(model)
    return -(6.0 * n3 * r + 2.0 * n2) / model.T


def eval_dynamics(model: PlantModel, r: float, delta: float) -> float:
    """Yaw acceleration f(r) + b*delta [deg/s^2]."""
    if model.kind == "nomoto":
        return (-r + model.K * delta) / model.T
    return eval_f(model, r) + model.b * delta
