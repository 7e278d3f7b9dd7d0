#!/usr/bin/env python3
"""
Experiments with weighted composition operators on the Bloch and Dirichlet spaces.

Usage:
  python experiment.py classify --config configs/default.json
  python experiment.py predict --config configs/default.json --out results/run_0 --json
  python experiment.py verify --seed 42

Exit codes: 0 pass, 1 config error, 2 domain error, 3 precondition failure, 4 tolerance failure.
"""
import argparse
import logging
import sys

import settings
from nlab import elk
from nlab.exception import ConfigError, InternalError, NLabException, ToleranceError
from utils import TaskResult, load_script
from wcop.config import ExperimentConfig, load_config
from wcop.factory import apply_tolerances
from wcop.report import Report

COMMANDS = (
    "classify",
    "predict",
    "estimate-radius",
    "check-bounded",
    "check-invertible",
    "root-cloud",
    "truncate-eigs",
    "probe-conjecture",
    "verify",
)

logger = logging.getLogger(__name__)


def build_parser():
    parser = argparse.ArgumentParser(
        description="Weighted composition operator experiments",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python experiment.py classify --config configs/default.json
  python experiment.py verify --config configs/default.json --out results --json
        """,
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", type=str, default=None,
                        help="Experiment config JSON (default: built-in defaults)")
    parser.add_argument("--out", type=str, default=None, help="Output directory for reports")
    parser.add_argument("--seed", type=int, default=None, help="Random seed for the property suites")
    parser.add_argument("--grid-levels", type=int, default=None, help="Radial levels of the disc grid")
    parser.add_argument("--json", action="store_true", help="Print the report to stdout")
    return parser


def load(args) -> ExperimentConfig:
    config = load_config(args.config) if args.config else ExperimentConfig.from_dict({})
    return config.with_overrides(seed=args.seed, grid_levels=args.grid_levels, output_dir=args.out)


def execute(report: Report) -> Report:
    apply_tolerances(report.config)

    run = load_script(report.command)
    task_result = run(config=report.config, report=report)
    if not isinstance(task_result, TaskResult):
        raise InternalError("Unhandled task result: %s" % task_result)

    report.result = task_result.result
    if task_result.extra:
        logger.info("artifacts: %s", task_result.extra)

    failed = report.failed_records
    if failed:
        raise ToleranceError("%d check(s) outside tolerance: %s" % (
            len(failed), ", ".join(r.name for r in failed)))
    return report


def main(argv=None):
    args = build_parser().parse_args(argv)
    elk.setup("wcop", args.command, level=settings.LOG_LEVEL)

    try:
        config = load(args)
    except ConfigError as e:
        logger.error("config error: %s", e.message)
        return e.exit_code

    report = Report(args.command, config)
    code = 0
    try:
        execute(report)
    except ToleranceError as e:
        logger.error("%s: %s", args.command, e.message)
        code = e.exit_code
    except NLabException as e:
        logger.error("%s failed: %s", args.command, e.message)
        if e.witness:
            logger.error("witness: %s", e.witness)
        report.error = {"type": type(e).__name__, "message": e.message, "witness": e.witness}
        code = e.exit_code
    except Exception as e:
        logger.exception("%s failed with an unexpected error", args.command)
        report.error = {"type": type(e).__name__, "message": str(e), "witness": None}
        code = InternalError.exit_code

    report.write()
    if args.json:
        print(report.to_json())
    return code


if __name__ == "__main__":
    sys.exit(main())
