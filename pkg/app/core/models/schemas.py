"""Domain types shared across the simulator.

Configuration-like values are frozen pydantic models validated on load.
Per-step values (states, reference samples, error vectors, telemetry rows)
are NamedTuples: they are created thousands of times per run.
"""
import math
from typing import Annotated, Dict, List, Literal, NamedTuple, Optional, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.config.settings import settings

# Column order of the telemetry CSV. Frozen: downstream tooling diffs on it.
TELEMETRY_COLUMNS = (
    "t", "psi", "psi_d", "r", "delta", "delta_dot", "xi", "eta",
    "z1", "z2", "z3", "z4", "V",
)
MARGIN_COLUMNS = ("margin_delta", "margin_xi")


def _require_finite(value: float, name: str) -> float:
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite")
    return value


# ---------------------------------------------------------------------------
# Plant and constraint parameters
# ---------------------------------------------------------------------------

class PlantModel(BaseModel):
    """Yaw dynamics r_dot = f(r) + b*delta with f(r) = -H(r)/T and b = K/T."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["nomoto", "norrbin", "custom-polynomial"] = "norrbin"
    K: float = Field(..., description="Gain [1/s]")
    T: float = Field(..., description="Time constant [s]")
    n0: float = 0.0
    n1: float = 1.0
    n2: float = 0.0
    n3: float = 0.0

    @field_validator("K", "T", "n0", "n1", "n2", "n3")
    @classmethod
    def _finite(cls, v: float, info) -> float:
        return _require_finite(v, info.field_name)

    @model_validator(mode="after")
    def _check_gain_and_time_constant(self) -> "PlantModel":
        if self.K == 0.0:
            raise ValueError("K must be non-zero")
        if self.T == 0.0:
            raise ValueError("T must be non-zero")
        if self.kind != "custom-polynomial" and self.T < 0.0:
            raise ValueError(f"T must be positive for a {self.kind} plant")
        return self

    @property
    def b(self) -> float:
        return self.K / self.T


class ConstraintLimits(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    M: float = Field(..., gt=0, description="Largest rudder angle [deg]")
    R: float = Field(..., gt=0, description="Largest rudder rate [deg/s]")


class CascadeGains(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    k_delta: float = Field(default=1.0, gt=0)
    k_xi: float = Field(default=1.0, gt=0)


class GuardMargins(BaseModel):
    """Relative distance from a constraint boundary at which a state is rejected."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    eps_delta: float = Field(default_factory=lambda: settings.guard_eps_delta, gt=0, lt=1)
    eps_xi: float = Field(default_factory=lambda: settings.guard_eps_xi, gt=0, lt=1)


class BacksteppingGains(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    c1: float = Field(default=1.0, gt=0)
    c2: float = Field(default=1.0, gt=0)
    c3: float = Field(default=1.0, gt=0)
    c4: float = Field(default=1.0, gt=0)

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3, self.c4])


class ControlConfig(BaseModel):
    """Everything a controller evaluation needs besides the plant."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    limits: ConstraintLimits
    cascade: CascadeGains = Field(default_factory=CascadeGains)
    gains: BacksteppingGains = Field(default_factory=BacksteppingGains)
    guards: GuardMargins = Field(default_factory=GuardMargins)
    control_cap: float = Field(default_factory=lambda: settings.control_cap, gt=0)


# ---------------------------------------------------------------------------
# Per-step values
# ---------------------------------------------------------------------------

class ShipKinematicState(NamedTuple):
    psi: float
    r: float


class FullState(NamedTuple):
    """(psi, r, delta, xi): heading, yaw rate, rudder angle, auxiliary rate state."""

    psi: float
    r: float
    delta: float
    xi: float

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=float)

    @classmethod
    def from_array(cls, x: np.ndarray) -> "FullState":
        return cls(float(x[0]), float(x[1]), float(x[2]), float(x[3]))


class ReferenceSample(NamedTuple):
    psi_d: float
    dpsi_d: float
    d2psi_d: float
    d3psi_d: float
    d4psi_d: float


class ErrorVector(NamedTuple):
    z1: float
    z2: float
    z3: float
    z4: float

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=float)


class TelemetryRecord(NamedTuple):
    t: float
    psi: float
    psi_d: float
    r: float
    delta: float
    delta_dot: float
    xi: float
    eta: float
    z1: float
    z2: float
    z3: float
    z4: float
    V: float
    margin_delta: float
    margin_xi: float


# ---------------------------------------------------------------------------
# Scenario configuration
# ---------------------------------------------------------------------------

class TanhReferenceSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["tanh"] = "tanh"
    Psi_d: float = Field(..., description="Final heading change [deg]")
    t_tanh: Optional[float] = Field(default=None, description="Centre time [s]; 5 + 0.3*|Psi_d| when omitted")
    d_tanh: Optional[float] = Field(default=None, gt=0, description="Width [s]; 2.5 + 0.15*|Psi_d| when omitted")


class ConstantReferenceSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["constant"] = "constant"
    psi0: float = 0.0


class SineReferenceSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["sine"] = "sine"
    amplitude: float
    omega: float = Field(..., description="Angular frequency [rad/s]")
    phase: float = 0.0
    offset: float = 0.0


class StepReferenceSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["step"] = "step"
    Psi_d: float
    t_step: float = 0.0


ReferenceSpec = Annotated[
    Union[TanhReferenceSpec, ConstantReferenceSpec, SineReferenceSpec, StepReferenceSpec],
    Field(discriminator="kind"),
]

ControllerKind = Literal["proposed", "conventional", "conventional-saturated", "conventional-servo"]


class ControllerSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: ControllerKind = "proposed"
    gains: BacksteppingGains = Field(default_factory=BacksteppingGains)
    control_cap: float = Field(default_factory=lambda: settings.control_cap, gt=0)


class ServoParams(BaseModel):
    """First-order rudder servo delta_dot = (K_R*delta_c - delta)/T_R."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    T_R: float = Field(..., gt=0)
    K_R: float = Field(default=1.0, gt=0)


class SimulationSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    dt: float = Field(default_factory=lambda: settings.default_dt, gt=0)
    horizon: float = Field(default_factory=lambda: settings.default_horizon, gt=0)
    method: Literal["euler", "euler_maruyama"] = "euler"
    sigma: float = Field(default=0.0, ge=0, description="Noise intensity on r [deg/s per sqrt(s)]")
    seed: int = Field(default=0, ge=0, lt=2**64)

    @model_validator(mode="after")
    def _horizon_covers_a_step(self) -> "SimulationSpec":
        if self.horizon < self.dt:
            raise ValueError("horizon must be at least one step dt")
        return self

    @property
    def n_steps(self) -> int:
        return int(round(self.horizon / self.dt))


class InitialStateSpec(BaseModel):
    """Initial (psi, r, delta, xi), or 'on_reference' to start on the reference trajectory."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    mode: Literal["explicit", "on_reference"] = "explicit"
    psi: float = 0.0
    r: float = 0.0
    delta: float = 0.0
    xi: float = 0.0


class ScenarioConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str
    description: str = ""
    plant: PlantModel
    limits: ConstraintLimits
    cascade: CascadeGains = Field(default_factory=CascadeGains)
    guards: GuardMargins = Field(default_factory=GuardMargins)
    controller: ControllerSpec = Field(default_factory=ControllerSpec)
    servo: Optional[ServoParams] = None
    reference: ReferenceSpec
    simulation: SimulationSpec = Field(default_factory=SimulationSpec)
    initial_state: InitialStateSpec = Field(default_factory=InitialStateSpec)

    def control_config(self) -> ControlConfig:
        return ControlConfig(
            limits=self.limits,
            cascade=self.cascade,
            gains=self.controller.gains,
            guards=self.guards,
            control_cap=self.controller.control_cap,
        )


# ---------------------------------------------------------------------------
# Results
# ---------------------------------------------------------------------------

class RunStatus(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["completed", "guard_violation", "numeric_failure"] = "completed"
    t: Optional[float] = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.kind == "completed"

    def __str__(self) -> str:
        return self.kind if self.t is None else f"{self.kind}({self.t:.4f})"


class Trajectory(BaseModel):
    """Telemetry rows of one run, stored as a (steps, columns) float array."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    scenario: str
    controller_kind: ControllerKind
    dt: float
    data: np.ndarray
    status: RunStatus = Field(default_factory=RunStatus)

    def __len__(self) -> int:
        return int(self.data.shape[0])

    def column(self, name: str) -> np.ndarray:
        return self.data[:, TelemetryRecord._fields.index(name)]

    def record(self, index: int) -> TelemetryRecord:
        return TelemetryRecord(*(float(v) for v in self.data[index]))

    def to_frame(self, include_margins: bool = False) -> pd.DataFrame:
        columns = list(TELEMETRY_COLUMNS) + (list(MARGIN_COLUMNS) if include_margins else [])
        frame = pd.DataFrame(self.data, columns=list(TelemetryRecord._fields))
        return frame[columns]


class FeasibilityReport(BaseModel):
    magnitude_ok: bool
    rate_ok: bool
    worst_margin_magnitude: float = Field(..., description="M - max required |delta| [deg]")
    worst_margin_rate: float = Field(..., description="R - max required |delta_dot| [deg/s]")
    worst_times: List[float] = Field(..., description="Times of the worst magnitude and rate demand [s]")
    first_violation_magnitude: Optional[float] = None
    first_violation_rate: Optional[float] = None
    horizon: float
    sample_dt: float

    @property
    def ok(self) -> bool:
        return self.magnitude_ok and self.rate_ok


class MetricsSummary(BaseModel):
    steps: int
    max_abs_delta: float
    max_abs_delta_dot: float
    max_abs_eta: float
    final_abs_error: float
    mean_abs_error_final_half: float
    decay_rate: Optional[float] = None
    settling_time: Optional[float] = None
    sign_changes_final_half: int = 0


class RunManifest(BaseModel):
    scenario: str
    config_hash: str
    code_version: str
    created_at: str
    outputs: Dict[str, str]
    status: RunStatus
    metrics: Optional[MetricsSummary] = None
    feasibility: Optional[FeasibilityReport] = None
    config: ScenarioConfig
