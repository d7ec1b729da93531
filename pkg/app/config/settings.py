# app/config/settings.py
from pydantic_settings import BaseSettings
from pydantic import Field


class Settings(BaseSettings):
    """Application settings with environment variable support."""

    project_name: str = "Constrained Steering Simulator"
    version: str = Field(default="1.0.0", description="Code version written into run manifests")

    # Scenario locations
    preset_dir: str = Field(
        default="presets",
        description="Directory that bare preset names are resolved against"
    )
    output_dir: str = Field(default="runs", description="Default root for run outputs")

    # Numerical guards
    guard_eps_delta: float = Field(default=1e-3, description="Relative rudder-angle guard margin")
    guard_eps_xi: float = Field(default=1e-3, description="Relative auxiliary-rate guard margin")
    control_cap: float = Field(default=1e9, description="Largest admissible |eta| and 1/(b g_delta g_xi)")

    # Simulation defaults
    default_dt: float = Field(default=0.01, description="Integration step [s]")
    default_horizon: float = Field(default=100.0, description="Simulation horizon [s]")
    feasibility_dt: float = Field(default=0.01, description="Grid step for reference feasibility checks [s]")
    sweep_jobs: int = Field(default=1, description="joblib worker count for sweeps")

    # Output
    csv_float_format: str = Field(default="%.17g", description="Float format for telemetry files")

    # Logging
    log_level: str = Field(default="INFO")
    log_file: str = Field(default="logs/steersim.log")

    model_config = {
        "env_file": ".env",
        "env_prefix": "STEERSIM_",
        "case_sensitive": False,
        "extra": "ignore"
    }


settings = Settings()
