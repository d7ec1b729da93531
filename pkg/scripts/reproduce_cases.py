#!/usr/bin/env python3
"""
Script to run the shipped case-study presets and print one comparison table.
"""

import argparse
import sys
from pathlib import Path

import pandas as pd

# Add app to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from app.core.repositories.run_repository import RunRepository  # noqa: E402
from app.core.repositories.scenario_repository import ScenarioRepository  # noqa: E402
from app.core.services.run_service import RunService  # noqa: E402
from app.utils.exceptions import SteeringSimException  # noqa: E402
from app.utils.logger import setup_logging  # noqa: E402

DEFAULT_PRESETS = [
    "case1_psi10", "case1_psi20", "case1_psi30", "case1_psi40", "case1_psi50",
    "case2", "case2_moderate", "degradation", "degradation_proposed",
    "conventional_servo", "guard_trip",
]


def run_presets(service: RunService, names):
    """Run each preset and collect one summary row per run."""
    rows = []
    for name in names:
        print(f"Running {name}...")
        try:
            result = service.run(service.scenarios.load(name))
        except SteeringSimException as e:
            print(f"❌ {name}: {e}")
            rows.append({"scenario": name, "status": "config_error"})
            continue

        status = result.trajectory.status
        marker = "✓" if status.ok else "⚠️ "
        print(f"{marker} {name}: {status}")

        row = {"scenario": name, "status": str(status), "rows": len(result.trajectory)}
        if result.metrics is not None:
            m = result.metrics
            row.update(
                max_abs_delta=m.max_abs_delta,
                max_abs_delta_dot=m.max_abs_delta_dot,
                final_abs_error=m.final_abs_error,
                decay_rate=m.decay_rate,
                settling_time=m.settling_time,
                sign_changes=m.sign_changes_final_half,
            )
        rows.append(row)
    return pd.DataFrame(rows)


def main():
    parser = argparse.ArgumentParser(description="Reproduce the case-study runs")
    parser.add_argument("--out-dir", default="runs/cases", help="Output root")
    parser.add_argument("--preset-dir", default=None, help="Preset directory")
    parser.add_argument("presets", nargs="*", default=DEFAULT_PRESETS)

    args = parser.parse_args()
    setup_logging(level="WARNING")

    print("🚀 Running case-study presets...")
    print("=" * 60)

    service = RunService(ScenarioRepository(args.preset_dir), RunRepository(args.out_dir))
    table = run_presets(service, args.presets)
    summary = service.runs.save_sweep_summary("summary", table)

    print("\n" + "=" * 60)
    print(table.to_string(index=False))
    print(f"\n📋 Summary written to {summary}")

    failed = table["status"] == "config_error"
    sys.exit(1 if failed.any() else 0)


if __name__ == "__main__":
    main()
