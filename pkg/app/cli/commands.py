"""Command handlers behind ``python -m app.main``.

Each handler returns a process exit status:
0 completed / feasible, 1 guard violation or infeasible, 2 numeric failure,
3 configuration error.
"""
import logging
from pathlib import Path
from typing import Optional, Sequence

from app.core.models.schemas import FeasibilityReport, RunStatus
from app.core.repositories.run_repository import RunRepository
from app.core.repositories.scenario_repository import ScenarioRepository
from app.core.services.run_service import RunService
from app.utils.exceptions import SteeringSimException

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_NUMERIC = 2
EXIT_CONFIG = 3


def exit_code_for(status: RunStatus) -> int:
    return {"completed": EXIT_OK, "guard_violation": EXIT_FAILED, "numeric_failure": EXIT_NUMERIC}[status.kind]


def _service(out_dir: Optional[str], preset_dir: Optional[str]) -> RunService:
    return RunService(ScenarioRepository(preset_dir), RunRepository(out_dir))


def cmd_run(
    config_path: str,
    out_dir: Optional[str] = None,
    seed: Optional[int] = None,
    dt: Optional[float] = None,
    preset_dir: Optional[str] = None
) -> int:
    """Run one scenario and write telemetry, plot data, metrics and manifest."""
    service = _service(out_dir, preset_dir)
    try:
        config = service.scenarios.apply_overrides(service.scenarios.load(config_path), seed=seed, dt=dt)
        result = service.run(config)
    except SteeringSimException as e:
        logger.error(f"❌ {e}")
        print(f"error: {e}")
        return EXIT_CONFIG

    status = result.trajectory.status
    print(f"scenario   : {config.name}")
    print(f"status     : {status}")
    if status.detail:
        print(f"detail     : {status.detail}")
    print(f"rows       : {len(result.trajectory)}")
    if result.metrics is not None:
        m = result.metrics
        print(f"max|delta| : {m.max_abs_delta:.6g} deg")
        print(f"max|ddelta|: {m.max_abs_delta_dot:.6g} deg/s")
        print(f"final|e|   : {m.final_abs_error:.6g} deg")
    print(f"output     : {Path(result.manifest.outputs['manifest']).parent}")
    return exit_code_for(status)


def cmd_sweep(
    preset: str,
    values: Sequence[float],
    param: str = "psi_d",
    out_dir: Optional[str] = None,
    seed: Optional[int] = None,
    dt: Optional[float] = None,
    jobs: Optional[int] = None,
    preset_dir: Optional[str] = None
) -> int:
    """Run a preset once per value and print the comparison table."""
    service = _service(out_dir, preset_dir)
    try:
        config = service.scenarios.apply_overrides(service.scenarios.load(preset), seed=seed, dt=dt)
        table = service.sweep(config, param, list(values), jobs=jobs)
    except SteeringSimException as e:
        logger.error(f"❌ {e}")
        print(f"error: {e}")
        return EXIT_CONFIG

    if table.empty:
        print("no sweep values given")
    else:
        print(table.to_string(index=False))
    return EXIT_OK if (table["status"] == "completed").all() else EXIT_FAILED


def render_feasibility(report: FeasibilityReport) -> str:
    def mark(ok: bool) -> str:
        return "ok" if ok else "VIOLATED"

    lines = [
        f"magnitude : {mark(report.magnitude_ok)}  margin {report.worst_margin_magnitude:.6g} deg"
        f"  worst at t={report.worst_times[0]:.2f}s",
        f"rate      : {mark(report.rate_ok)}  margin {report.worst_margin_rate:.6g} deg/s"
        f"  worst at t={report.worst_times[1]:.2f}s",
    ]
    if report.first_violation_magnitude is not None:
        lines.append(f"first magnitude violation at t={report.first_violation_magnitude:.2f}s")
    if report.first_violation_rate is not None:
        lines.append(f"first rate violation at t={report.first_violation_rate:.2f}s")
    return "\n".join(lines)


def cmd_check(config_path: str, dt: Optional[float] = None, preset_dir: Optional[str] = None) -> int:
    """Print the feasibility margins of a scenario's reference; 0 iff both conditions hold."""
    service = _service(None, preset_dir)
    try:
        config = service.scenarios.load(config_path)
        report = service.check(config, sample_dt=dt)
    except SteeringSimException as e:
        logger.error(f"❌ {e}")
        print(f"error: {e}")
        return EXIT_CONFIG

    print(f"scenario  : {config.name}")
    print(render_feasibility(report))
    return EXIT_OK if report.ok else EXIT_FAILED
