import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Union

import pandas as pd

from app.config.settings import settings
from app.core.models.schemas import (
    TELEMETRY_COLUMNS,
    FeasibilityReport,
    MetricsSummary,
    RunManifest,
    ScenarioConfig,
    Trajectory,
)
from app.utils.hashing import stable_hash

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

TELEMETRY_CSV = "telemetry.csv"
PLOT_DATA = "telemetry.dat"
METRICS_JSON = "metrics.json"
MANIFEST_JSON = "manifest.json"


def config_hash(config: ScenarioConfig) -> str:
    """sha256 of the canonical JSON form of the fully resolved scenario."""
    return stable_hash(config.model_dump(mode="json"))


def write_telemetry_csv(trajectory: Trajectory, path: PathLike, float_format: Optional[str] = None) -> Path:
    path = Path(path)
    trajectory.to_frame().to_csv(
        path,
        index=False,
        float_format=float_format or settings.csv_float_format,
        lineterminator="\n",
    )
    return path


def export_plot_data(trajectory: Trajectory, path: PathLike, float_format: Optional[str] = None) -> Path:
    """Whitespace-separated columns with a '#' header line, for gnuplot 'using' clauses."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# " + " ".join(TELEMETRY_COLUMNS) + "\n")
        trajectory.to_frame().to_csv(
            fh,
            sep=" ",
            index=False,
            header=False,
            float_format=float_format or settings.csv_float_format,
            lineterminator="\n",
        )
    return path


class RunRepository:
    """Filesystem store for run artifacts, one directory per run."""

    def __init__(self, root: Optional[PathLike] = None):
        self.root = Path(root or settings.output_dir)

    def run_dir(self, name: str) -> Path:
        path = self.root / name
        path.mkdir(parents=True, exist_ok=True)
        return path

    def save_run(
        self,
        config: ScenarioConfig,
        trajectory: Trajectory,
        metrics: Optional[MetricsSummary],
        feasibility: Optional[FeasibilityReport] = None
    ) -> RunManifest:
        """Write telemetry CSV, plot data, metrics and manifest for one run."""
        directory = self.run_dir(config.name)
        outputs = {
            "telemetry": str(write_telemetry_csv(trajectory, directory / TELEMETRY_CSV)),
            "plot_data": str(export_plot_data(trajectory, directory / PLOT_DATA)),
        }

        if metrics is not None:
            metrics_path = directory / METRICS_JSON
            metrics_path.write_text(metrics.model_dump_json(indent=2), encoding="utf-8")
            outputs["metrics"] = str(metrics_path)

        manifest_path = directory / MANIFEST_JSON
        outputs["manifest"] = str(manifest_path)
        manifest = RunManifest(
            scenario=config.name,
            config_hash=config_hash(config),
            code_version=settings.version,
            created_at=datetime.now(timezone.utc).isoformat(),
            outputs=outputs,
            status=trajectory.status,
            metrics=metrics,
            feasibility=feasibility,
            config=config,
        )
        manifest_path.write_text(manifest.model_dump_json(indent=2), encoding="utf-8")
        logger.info(f"💾 Saved run '{config.name}' to {directory}")
        return manifest

    def save_sweep_summary(self, name: str, table: pd.DataFrame) -> Path:
        path = self.run_dir(name) / "summary.csv"
        table.to_csv(path, index=False, float_format=settings.csv_float_format, lineterminator="\n")
        logger.info(f"💾 Saved sweep summary to {path}")
        return path

    @staticmethod
    def load_manifest(path: PathLike) -> RunManifest:
        return RunManifest.model_validate_json(Path(path).read_text(encoding="utf-8"))
