"""Target headings with analytic derivatives through fourth order.

The tracking law consumes psi_d and four of its derivatives, so every reference
here supplies them in closed form. References that would need numerical
differentiation are refused by ``ensure_analytic``.
"""
import math
from abc import ABC, abstractmethod
from typing import ClassVar, List, Optional, Tuple

import numpy as np
from numpy.polynomial import Polynomial

from app.core.models.schemas import (
    ConstantReferenceSpec,
    ReferenceSample,
    ReferenceSpec,
    SineReferenceSpec,
    StepReferenceSpec,
    TanhReferenceSpec,
)
from app.utils.exceptions import InvalidReferenceError


def _tanh_derivative_polynomials(order: int) -> Tuple[Polynomial, ...]:
    # d/du P(tanh u) = P'(y) * (1 - y**2) with y = tanh u
    y = Polynomial([0.0, 1.0])
    sech2 = 1.0 - y ** 2
    polys = []
    p = y
    for _ in range(order):
        p = p.deriv() * sech2
        polys.append(p)
    return tuple(polys)


_TANH_DERIVATIVES = _tanh_derivative_polynomials(4)


class Reference(ABC):
    """A four-times differentiable target heading psi_d(t) [deg]."""

    analytic: ClassVar[bool] = True
    kind: ClassVar[str] = ""

    @abstractmethod
    def sample(self, t: float) -> ReferenceSample:
        ...

    def sample_grid(self, t: np.ndarray) -> np.ndarray:
        """(5, len(t)) array of psi_d and its derivatives on a time grid."""
        return np.array([self.sample(float(ti)) for ti in t]).T.reshape(5, -1)

    def jumps(self, t0: float, t1: float) -> List[Tuple[float, float]]:
        """(time, size) of heading discontinuities in [t0, t1]."""
        return []


class TanhReference(Reference):
    """psi_d = Psi_d/2 * (1 + tanh((t - t_tanh)/d_tanh))."""

    kind = "tanh"

    def __init__(self, Psi_d: float, t_tanh: Optional[float] = None, d_tanh: Optional[float] = None):
        self.Psi_d = float(Psi_d)
        self.t_tanh = 5.0 + 0.3 * abs(self.Psi_d) if t_tanh is None else float(t_tanh)
        self.d_tanh = 2.5 + 0.15 * abs(self.Psi_d) if d_tanh is None else float(d_tanh)
        if not self.d_tanh > 0.0:
            raise InvalidReferenceError(f"d_tanh must be positive, got {self.d_tanh}")

    def sample(self, t: float) -> ReferenceSample:
        y = math.tanh((t - self.t_tanh) / self.d_tanh)
        half = 0.5 * self.Psi_d
        d = self.d_tanh
        p1, p2, p3, p4 = (float(p(y)) for p in _TANH_DERIVATIVES)
        return ReferenceSample(
            psi_d=half * (1.0 + y),
            dpsi_d=half * p1 / d,
            d2psi_d=half * p2 / d ** 2,
            d3psi_d=half * p3 / d ** 3,
            d4psi_d=half * p4 / d ** 4,
        )

    def sample_grid(self, t: np.ndarray) -> np.ndarray:
        y = np.tanh((np.asarray(t, dtype=float) - self.t_tanh) / self.d_tanh)
        half = 0.5 * self.Psi_d
        rows = [half * (1.0 + y)]
        rows += [half * p(y) / self.d_tanh ** (n + 1) for n, p in enumerate(_TANH_DERIVATIVES)]
        return np.vstack(rows)


class ConstantReference(Reference):
    kind = "constant"

    def __init__(self, psi0: float = 0.0):
        self.psi0 = float(psi0)

    def sample(self, t: float) -> ReferenceSample:
        return ReferenceSample(self.psi0, 0.0, 0.0, 0.0, 0.0)

    def sample_grid(self, t: np.ndarray) -> np.ndarray:
        grid = np.zeros((5, len(t)))
        grid[0] = self.psi0
        return grid


class SineReference(Reference):
    """psi_d = offset + amplitude*sin(omega*t + phase)."""

    kind = "sine"

    def __init__(self, amplitude: float, omega: float, phase: float = 0.0, offset: float = 0.0):
        self.amplitude = float(amplitude)
        self.omega = float(omega)
        self.phase = float(phase)
        self.offset = float(offset)

    def sample(self, t: float) -> ReferenceSample:
        grid = self.sample_grid(np.array([t]))
        return ReferenceSample(*(float(v) for v in grid[:, 0]))

    def sample_grid(self, t: np.ndarray) -> np.ndarray:
        theta = self.omega * np.asarray(t, dtype=float) + self.phase
        rows = [self.offset + self.amplitude * np.sin(theta)]
        rows += [
            self.amplitude * self.omega ** n * np.sin(theta + n * np.pi / 2.0)
            for n in range(1, 5)
        ]
        return np.vstack(rows)


class StepReference(Reference):
    """Heading step of Psi_d at t_step; derivatives are zero away from the jump."""

    kind = "step"

    def __init__(self, Psi_d: float, t_step: float = 0.0):
        self.Psi_d = float(Psi_d)
        self.t_step = float(t_step)

    def sample(self, t: float) -> ReferenceSample:
        return ReferenceSample(self.Psi_d if t >= self.t_step else 0.0, 0.0, 0.0, 0.0, 0.0)

    def sample_grid(self, t: np.ndarray) -> np.ndarray:
        grid = np.zeros((5, len(t)))
        grid[0] = np.where(np.asarray(t) >= self.t_step, self.Psi_d, 0.0)
        return grid

    def jumps(self, t0: float, t1: float) -> List[Tuple[float, float]]:
        if self.Psi_d != 0.0 and t0 <= self.t_step <= t1:
            return [(self.t_step, self.Psi_d)]
        return []


def constant_reference(psi0: float = 0.0) -> ConstantReference:
    return ConstantReference(psi0)


def sample(reference: Reference, t: float) -> ReferenceSample:
    return reference.sample(t)


def ensure_analytic(reference: Reference) -> Reference:
    if not isinstance(reference, Reference) or not getattr(reference, "analytic", False):
        raise InvalidReferenceError(
            f"{type(reference).__name__} does not provide analytic derivatives up to fourth order"
        )
    return reference


def build_reference(spec: ReferenceSpec) -> Reference:
    """Instantiate the reference described by a scenario's ``reference`` section."""
    if isinstance(spec, TanhReferenceSpec):
        reference = TanhReference(spec.Psi_d, spec.t_tanh, spec.d_tanh)
    elif isinstance(spec, ConstantReferenceSpec):
        reference = ConstantReference(spec.psi0)
    elif isinstance(spec, SineReferenceSpec):
        reference = SineReference(spec.amplitude, spec.omega, spec.phase, spec.offset)
    elif isinstance(spec, StepReferenceSpec):
        reference = StepReference(spec.Psi_d, spec.t_step)
    else:
        raise InvalidReferenceError(f"Unsupported reference section: {spec!r}")
    return ensure_analytic(reference)
