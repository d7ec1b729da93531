"""Summary statistics of a simulated trajectory."""
from typing import Optional

import numpy as np

from app.core.models.schemas import MetricsSummary, Trajectory


def fit_decay_rate(
    t: np.ndarray,
    V: np.ndarray,
    floor: float = 1e-10,
    start_fraction: float = 0.1
) -> Optional[float]:
    """
    Exponential decay rate of V fitted by least squares on log V.

    The window is the first contiguous run of samples with
    floor <= V <= start_fraction*V(0). Returns None when it has fewer than two samples.
    """
    if len(V) < 2 or not V[0] > floor:
        return None
    inside = (V >= floor) & (V <= start_fraction * V[0])
    if not inside.any():
        return None
    start = int(np.argmax(inside))
    outside_after = np.flatnonzero(~inside[start:])
    stop = start + int(outside_after[0]) if outside_after.size else len(V)
    if stop - start < 2:
        return None
    slope = np.polyfit(t[start:stop], np.log(V[start:stop]), 1)[0]
    return float(-slope)


def settling_time(t: np.ndarray, error: np.ndarray, psi_d: np.ndarray) -> Optional[float]:
    """First time after which |error| stays within 2% of the reference excursion (0.1 deg if constant)."""
    span = float(np.max(psi_d) - np.min(psi_d))
    band = 0.02 * span if span > 0 else 0.1
    outside = np.abs(error) > band
    if not outside.any():
        return float(t[0])
    if outside[-1]:
        return None
    return float(t[np.flatnonzero(outside)[-1] + 1])


def count_sign_changes(values: np.ndarray, band: float = 1e-3) -> int:
    """Sign changes among samples with |value| > band."""
    signs = np.sign(values[np.abs(values) > band])
    if signs.size < 2:
        return 0
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def compute_metrics(trajectory: Trajectory, oscillation_band: float = 1e-3) -> MetricsSummary:
    if len(trajectory) == 0:
        raise ValueError("trajectory is empty")

    t = trajectory.column("t")
    psi_d = trajectory.column("psi_d")
    error = trajectory.column("psi") - psi_d
    V = trajectory.column("V")
    final_half = t >= t[0] + 0.5 * (t[-1] - t[0])

    return MetricsSummary(
        steps=len(trajectory),
        max_abs_delta=float(np.max(np.abs(trajectory.column("delta")))),
        max_abs_delta_dot=float(np.max(np.abs(trajectory.column("delta_dot")))),
        max_abs_eta=float(np.max(np.abs(trajectory.column("eta")))),
        final_abs_error=float(abs(error[-1])),
        mean_abs_error_final_half=float(np.mean(np.abs(error[final_half]))),
        decay_rate=fit_decay_rate(t, V),
        settling_time=settling_time(t, error, psi_d),
        sign_changes_final_half=count_sign_changes(error[final_half], oscillation_band),
    )
