"""
Command-line entry point: parses arguments into an event, routes it and prints JSON lines
"""
import argparse
import logging
import sys
from typing import Any, Dict, List, Optional, Sequence

from pydantic import ValidationError

from src.routes.command_routes import handle_command
from src.semantics.validation import DEFAULT_MAX_SIZE, DEFAULT_SAMPLES, DEFAULT_SEED
from src.solver.backends import INTERNAL
from src.utils.config import load_settings
from src.utils.response import (
    USAGE_EXIT_CODE,
    create_error_record,
    create_response,
    render_lines,
)

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logamort", description="Logarithmic amortised cost analysis for tree programs"
    )
    parser.add_argument("--log-level", default=None, help="overrides LOGAMORT_LOG_LEVEL")
    parser.add_argument("--timeout", type=float, default=None, help="solver time cap in seconds")
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", help="derive and solve the annotation constraints")
    _add_analysis_inputs(check)
    check.add_argument("--backend", default=INTERNAL)
    check.add_argument(
        "--explain", action="store_true", help="rules per path and weakening certificates"
    )

    run = commands.add_parser("run", help="evaluate a function and report its cost")
    run.add_argument("program")
    run.add_argument("function")
    run.add_argument("arguments", nargs="*", help="value literals, e.g. 1 '(leaf, 1, leaf)'")
    run.add_argument("--include", action="append", default=[])

    validate = commands.add_parser("validate", help="sample an annotation on random trees")
    validate.add_argument("program")
    validate.add_argument("coef")
    validate.add_argument("function")
    validate.add_argument("--include", action="append", default=[])
    validate.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    validate.add_argument("--max-size", type=int, default=DEFAULT_MAX_SIZE)
    validate.add_argument("--seed", type=int, default=DEFAULT_SEED)

    export = commands.add_parser("export", help="write the constraint system as SMT-LIB")
    _add_analysis_inputs(export)
    export.add_argument("--out", default=None)
    return parser


def _add_analysis_inputs(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("program")
    parser.add_argument("coef_file", nargs="?", default=None)
    parser.add_argument("tactics_file", nargs="?", default=None)
    parser.add_argument("--coef", default=None)
    parser.add_argument("--tactics", default=None)
    parser.add_argument("--include", action="append", default=[])


def build_event(arguments: argparse.Namespace) -> Dict[str, Any]:
    """Flatten parsed arguments into the event the router expects."""
    event = {key: value for key, value in vars(arguments).items() if value is not None}
    coef = event.pop("coef_file", None)
    tactics = event.pop("tactics_file", None)
    if coef is not None:
        event.setdefault("coef", coef)
    if tactics is not None:
        event.setdefault("tactics", tactics)
    event.pop("log_level", None)
    event.pop("timeout", None)
    return event


def main(argv: Optional[Sequence[str]] = None) -> int:
    arguments = build_parser().parse_args(argv)
    try:
        settings = load_settings(
            {"log_level": arguments.log_level, "solver_timeout": arguments.timeout}
        )
    except ValidationError as e:
        response = create_response(USAGE_EXIT_CODE, [create_error_record(e, arguments.command)])
        sys.stdout.write(render_lines(response))
        return USAGE_EXIT_CODE

    logging.basicConfig(
        level=settings.log_level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    event = build_event(arguments)
    logger.info(f"Received event: {event}")

    response = handle_command(event, settings)
    sys.stdout.write(render_lines(response))
    exit_code: int = response["exitCode"]
    return exit_code


def cli(argv: Optional[List[str]] = None) -> None:
    sys.exit(main(argv))


if __name__ == "__main__":
    cli()
