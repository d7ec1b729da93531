"""Fixed-step integrators.

States are numpy arrays whose last axis holds (psi, r, delta, xi); leading axes,
when present, index independent sample paths.
"""
from typing import Callable

import numpy as np

RHS = Callable[[np.ndarray], np.ndarray]

# Index of the yaw-rate channel, the only one driven by noise.
NOISE_CHANNEL = 1


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 stream; normals come from numpy's ziggurat ``standard_normal``."""
    return np.random.Generator(np.random.PCG64(seed))


def step_euler(rhs: RHS, state: np.ndarray, dt: float) -> np.ndarray:
    return state + dt * rhs(state)


def step_euler_maruyama(
    rhs: RHS,
    state: np.ndarray,
    dt: float,
    sigma: float,
    rng: np.random.Generator,
    noise_channel: int = NOISE_CHANNEL
) -> np.ndarray:
    """Euler drift plus additive sigma*sqrt(dt)*N(0, 1) on the noise channel only.

    No Wong-Zakai correction: the noise is additive.
    """
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    nxt = step_euler(rhs, state, dt)
    if sigma == 0.0:
        return nxt
    noise = rng.standard_normal(size=nxt.shape[:-1])
    nxt[..., noise_channel] += sigma * np.sqrt(dt) * noise
    return nxt
