import sys
from pathlib import Path

import pytest

# Add app to path
ROOT = Path(__file__).parent.parent
sys.path.append(str(ROOT))

from app.core.models.schemas import (  # noqa: E402
    CascadeGains,
    ConstraintLimits,
    ControlConfig,
    GuardMargins,
    PlantModel,
)
from app.core.repositories.scenario_repository import ScenarioRepository  # noqa: E402

PRESET_DIR = ROOT / "presets"


@pytest.fixture(scope="session")
def norrbin_plant():
    """Norrbin model of the reference ship."""
    return PlantModel(kind="norrbin", K=0.21, T=8.8, n0=0.0, n1=0.41, n2=0.0, n3=0.23)


@pytest.fixture(scope="session")
def limits():
    """Rudder limits M = 35 deg, R = 20 deg/s."""
    return ConstraintLimits(M=35.0, R=20.0)


@pytest.fixture(scope="session")
def cascade():
    return CascadeGains(k_delta=1.0, k_xi=1.0)


@pytest.fixture(scope="session")
def guards():
    return GuardMargins(eps_delta=1e-3, eps_xi=1e-3)


@pytest.fixture(scope="session")
def control_config(limits, cascade, guards):
    return ControlConfig(limits=limits, cascade=cascade, guards=guards)


@pytest.fixture(scope="session")
def scenarios():
    return ScenarioRepository(PRESET_DIR)
