# app/main.py
import argparse
import logging
import sys
from typing import List, Optional

from app.cli.commands import cmd_check, cmd_run, cmd_sweep
from app.config.settings import settings
from app.core.repositories.scenario_repository import SWEEP_PARAMETERS
from app.utils.logger import setup_logging

logger = logging.getLogger(__name__)

DEFAULT_HEADING_SWEEP = [10.0, 20.0, 30.0, 40.0, 50.0]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="steersim",
        description=f"{settings.project_name} {settings.version}",
    )
    parser.add_argument("--preset-dir", default=None, help=f"Preset directory (default: {settings.preset_dir})")
    parser.add_argument("--log-level", default=None, help="Override the configured log level")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Simulate one scenario")
    run.add_argument("config", help="Scenario file, run manifest, or preset name")
    run.add_argument("--out-dir", default=None, help=f"Output root (default: {settings.output_dir})")
    run.add_argument("--seed", type=int, default=None, help="Override the noise seed")
    run.add_argument("--dt", type=float, default=None, help="Override the integration step")

    sweep = sub.add_parser("sweep", help="Run a preset over a list of parameter values")
    sweep.add_argument("preset", help="Scenario file or preset name")
    sweep.add_argument("--param", default="psi_d", choices=SWEEP_PARAMETERS)
    sweep.add_argument("--values", type=float, nargs="*", default=None,
                       help="Values to sweep (default for psi_d: 10 20 30 40 50)")
    sweep.add_argument("--out-dir", default=None)
    sweep.add_argument("--seed", type=int, default=None)
    sweep.add_argument("--dt", type=float, default=None)
    sweep.add_argument("--jobs", type=int, default=None, help="Parallel workers")

    check = sub.add_parser("check", help="Check reference feasibility against the rudder limits")
    check.add_argument("config", help="Scenario file or preset name")
    check.add_argument("--dt", type=float, default=None, help="Sampling step of the check grid")

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(level=args.log_level)

    if args.command == "run":
        return cmd_run(args.config, out_dir=args.out_dir, seed=args.seed, dt=args.dt, preset_dir=args.preset_dir)
    if args.command == "sweep":
        values = args.values
        if values is None:
            values = DEFAULT_HEADING_SWEEP if args.param == "psi_d" else []
        return cmd_sweep(
            args.preset, values, param=args.param, out_dir=args.out_dir,
            seed=args.seed, dt=args.dt, jobs=args.jobs, preset_dir=args.preset_dir,
        )
    return cmd_check(args.config, dt=args.dt, preset_dir=args.preset_dir)


if __name__ == "__main__":
    sys.exit(main())
