#!/usr/bin/env python3
"""
Carleman verification lab command line
Runs a check suite and writes its JSON and CSV reports
Exit codes: 0 pass, 1 failed checks, 2 bad input
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import structlog
from dotenv import load_dotenv
from pydantic import ValidationError

from .config.manager import ConfigManager
from .models.enums import LogLevel, Suite, WeightVariant
from .models.errors import (
    CalibrationError,
    ConfigurationError,
    DomainError,
    HypothesisViolationError,
    NumericalError,
)
from .models.shared import SuiteResult
from .services.suite_runner import VerificationService
from .storage.report_storage import ReportStorage
from .utils.log_setup import setup_logging

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

PROJECT_ROOT = Path(__file__).parent.parent

logger = structlog.get_logger(__name__)

# Alternative subcommand names
COMMAND_ALIASES = {
    Suite.HEAT_ESTIMATES: ["check-lemma33"],
    Suite.HALF_SPACE_ESTIMATES: ["check-lemma34"],
}
# Values of check-carleman --prop
PROP_VARIANTS = {"13": WeightVariant.WHOLE_SPACE, "14": WeightVariant.HALF_SPACE}


def _variant(value: str) -> WeightVariant:
    return WeightVariant(value.replace("-", "_"))


def _prop_variant(value: str) -> WeightVariant:
    if value not in PROP_VARIANTS:
        raise argparse.ArgumentTypeError(f"--prop takes 13 or 14, got {value}")
    return PROP_VARIANTS[value]


def command_suite(command: str) -> Suite:
    """Suite for a subcommand name or one of its aliases"""
    for suite, aliases in COMMAND_ALIASES.items():
        if command in aliases:
            return suite
    return Suite(command)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="carleman-lab",
        description="Numerical verification of Carleman estimates for parabolic operators",
    )
    parser.add_argument(
        "--config", help="YAML configuration file (default: config/lab.yaml)"
    )
    parser.add_argument("--seed", type=int, help="Override runtime.seed")
    parser.add_argument("--grid-level", type=int, help="Override runtime.grid_level")
    parser.add_argument("--tolerance", type=float, help="Override runtime.tolerance")
    parser.add_argument(
        "--parallel",
        action="store_true",
        help="Evaluate independent chunks on a thread pool",
    )
    parser.add_argument(
        "--output-dir", help="Directory for reports (default: runtime.output_dir)"
    )
    parser.add_argument(
        "--log-level",
        choices=[level.value for level in LogLevel],
        help="Logging level",
    )
    parser.add_argument(
        "--no-csv", action="store_true", help="Skip the per-sample margin CSV files"
    )

    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for suite in Suite:
        command = commands.add_parser(
            suite.value,
            aliases=COMMAND_ALIASES.get(suite, []),
            help=f"run {suite.value}",
        )
        if suite not in (Suite.CARLEMAN, Suite.CALIBRATE):
            continue
        variants = command.add_mutually_exclusive_group()
        variants.add_argument(
            "--variant",
            type=_variant,
            choices=list(WeightVariant),
            metavar="{whole-space,half-space}",
            help="Weight variant (default from the configuration)",
        )
        if suite is Suite.CARLEMAN:
            variants.add_argument(
                "--prop",
                dest="variant",
                type=_prop_variant,
                metavar="{13,14}",
                help="13 for the whole-space weight, 14 for the half-space weight",
            )
    return parser


def _write(
    storage: ReportStorage, results: Sequence[SuiteResult], aggregate: bool, csv: bool
) -> None:
    if aggregate:
        storage.write_all(results, margins=csv)
        return
    for result in results:
        storage.write_suite(result)
        if csv:
            storage.write_margins_csv(result)


def _summarize(results: Sequence[SuiteResult]) -> None:
    for result in results:
        status = "[OK]" if result.passed else "[FAIL]"
        print(
            f"{status} {result.suite}: {len(result.checks)} checks, "
            f"min margin {result.min_margin:.6g}"
        )
        for name in result.failed_checks():
            print(f"    failed: {name}")


def run(args: argparse.Namespace) -> int:
    manager = ConfigManager(args.config)
    manager.load_config(args.config)
    config = manager.apply_overrides(
        seed=args.seed,
        grid_level=args.grid_level,
        tolerance=args.tolerance,
        serial=False if args.parallel else None,
    )
    setup_logging(args.log_level or config.runtime.log_level)

    suite = command_suite(args.command)
    variant: Optional[WeightVariant] = getattr(args, "variant", None)
    if suite is Suite.CALIBRATE and variant is not None:
        config.calibration.variant = variant

    service = VerificationService(config)
    results: List[SuiteResult]
    if suite is Suite.REPORT_ALL:
        results = service.run_all()
    else:
        results = [service.run(suite, variant)]

    storage = ReportStorage(args.output_dir or config.runtime.output_dir)
    _write(storage, results, aggregate=suite is Suite.REPORT_ALL, csv=not args.no_csv)
    _summarize(results)
    return EXIT_OK if all(result.passed for result in results) else EXIT_FAILED


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point of the carleman-lab script"""
    load_dotenv(PROJECT_ROOT / ".env")
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level or LogLevel.INFO)

    try:
        return run(args)
    except (
        ConfigurationError,
        ValidationError,
        HypothesisViolationError,
        DomainError,
        ValueError,
    ) as e:
        logger.error("[FAIL] invalid input", command=args.command, error=str(e))
        print(f"[FAIL] {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except CalibrationError as e:
        logger.error(
            "[FAIL] calibration", worst_check=e.worst_check, worst_margin=e.worst_margin
        )
        print(f"[FAIL] {e}", file=sys.stderr)
        return EXIT_FAILED
    except NumericalError as e:
        logger.error("[FAIL] numerical breakdown", command=args.command, error=str(e))
        print(f"[FAIL] {e}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
