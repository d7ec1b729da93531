import logging
from typing import Any, Dict, List, NamedTuple, Optional, Sequence

import pandas as pd
from joblib import Parallel, delayed

from app.config.settings import settings
from app.core.models.schemas import FeasibilityReport, MetricsSummary, RunManifest, ScenarioConfig, Trajectory
from app.core.reference.feasibility import check_feasibility
from app.core.reference.references import build_reference
from app.core.repositories.run_repository import RunRepository
from app.core.repositories.scenario_repository import SWEEP_PARAMETERS, ScenarioRepository
from app.core.services.metrics import compute_metrics
from app.core.services.simulation_service import SimulationService
from app.utils.exceptions import ConfigValidationError, SteeringSimException

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = [
    "value", "max_abs_delta", "max_abs_delta_dot", "max_abs_eta",
    "final_abs_error", "decay_rate", "status", "feasible", "detail",
]


class RunResult(NamedTuple):
    trajectory: Trajectory
    metrics: Optional[MetricsSummary]
    manifest: RunManifest


class RunService:
    """
    Orchestrates scenario runs, feasibility checks and parameter sweeps.

    Repositories are injected so that tests can point them at temporary directories.
    """

    def __init__(self, scenarios: ScenarioRepository, runs: RunRepository):
        self.scenarios = scenarios
        self.runs = runs

    def check(self, config: ScenarioConfig, sample_dt: Optional[float] = None) -> FeasibilityReport:
        """Grid-check the reference of a scenario against its plant and limits."""
        return check_feasibility(
            build_reference(config.reference),
            config.plant,
            config.limits,
            horizon=config.simulation.horizon,
            sample_dt=sample_dt or settings.feasibility_dt,
        )

    def run(self, config: ScenarioConfig) -> RunResult:
        """Simulate one scenario and persist its artifacts."""
        feasibility = self.check(config)
        if not feasibility.ok:
            logger.warning(
                f"⚠️  Reference of '{config.name}' fails the feasibility conditions "
                f"(magnitude margin {feasibility.worst_margin_magnitude:.4g}, "
                f"rate margin {feasibility.worst_margin_rate:.4g}); simulating anyway"
            )

        trajectory = SimulationService(config).run()
        metrics = compute_metrics(trajectory) if len(trajectory) else None
        manifest = self.runs.save_run(config, trajectory, metrics, feasibility)
        return RunResult(trajectory, metrics, manifest)

    def sweep(
        self,
        config: ScenarioConfig,
        param: str,
        values: Sequence[float],
        jobs: Optional[int] = None
    ) -> pd.DataFrame:
        """
        One run per value plus a summary table.

        Values whose reference fails the feasibility check are flagged and not simulated.
        Failures are recorded per row; the sweep always completes.
        """
        if param not in SWEEP_PARAMETERS:
            raise ConfigValidationError(f"Unknown sweep parameter '{param}'; expected one of {SWEEP_PARAMETERS}")
        sweep_name = f"{config.name}_sweep_{param}"
        root = self.runs.root / sweep_name
        logger.info(f"🎯 Sweeping {param} over {list(values)} for '{config.name}'")

        rows: List[Dict[str, Any]] = Parallel(n_jobs=jobs or settings.sweep_jobs)(
            delayed(_sweep_row)(str(root), config, param, value) for value in values
        )

        table = pd.DataFrame(rows, columns=SWEEP_COLUMNS)
        self.runs.save_sweep_summary(sweep_name, table)
        return table


def _sweep_row(root: str, base: ScenarioConfig, param: str, value: float) -> Dict[str, Any]:
    row: Dict[str, Any] = dict.fromkeys(SWEEP_COLUMNS)
    row["value"] = value
    try:
        config = ScenarioRepository.with_parameter(base, param, value)
        service = RunService(ScenarioRepository(), RunRepository(root))
        feasibility = service.check(config)
        row["feasible"] = feasibility.ok

        if not feasibility.ok:
            row["status"] = "infeasible"
            logger.warning(f"⚠️  {config.name}: reference infeasible, skipped")
            return row

        result = service.run(config)
    except SteeringSimException as e:
        row.update(status="config_error", detail=str(e))
        logger.error(f"❌ {base.name} with {param}={value:g}: {e}")
        return row

    row["status"] = str(result.trajectory.status.kind)
    if result.metrics is not None:
        row.update(
            max_abs_delta=result.metrics.max_abs_delta,
            max_abs_delta_dot=result.metrics.max_abs_delta_dot,
            max_abs_eta=result.metrics.max_abs_eta,
            final_abs_error=result.metrics.final_abs_error,
            decay_rate=result.metrics.decay_rate,
        )
    return row
