"""Emit the expectile as a function of tau, for plotting."""

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from expectiles import EXIT_PARSE_ERROR, EXIT_USAGE_ERROR
from expectiles.dist_core import RiskLevel
from expectiles.errors import GridSpecError, InputFormatError, InvalidDistributionError
from expectiles.expectile import expectile_curve
from expectiles.report import format_number
from expectiles.typehints import INPUT_FORMATS, CurveArgs, infer_input_format, load_law

logging.basicConfig(level=logging.INFO, format="%(levelname)s - %(message)s")
logger = logging.getLogger(__name__)


def parse_grid(spec: str) -> list[float]:
    """Expand "start:stop:count" into `count` evenly spaced levels from `start` to `stop` inclusive.

    Args:
        spec (str): The grid specification.

    Returns:
        list[float]: The ascending levels.

    Raises:
        GridSpecError: If the specification is malformed or the levels leave (0, 0.5].
    """
    parts = spec.split(":")
    if len(parts) != 3:  # noqa: PLR2004
        msg = f"Grid must look like start:stop:count, got {spec!r}"
        raise GridSpecError(msg)
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as e:
        msg = f"Grid must look like start:stop:count, got {spec!r}"
        raise GridSpecError(msg) from e

    if count < 1:
        msg = f"Grid count must be at least 1, got {count}"
        raise GridSpecError(msg)
    if not (0.0 < start <= stop <= 0.5):  # noqa: PLR2004
        msg = f"Grid must satisfy 0 < start <= stop <= 0.5, got {start}:{stop}"
        raise GridSpecError(msg)
    if count == 1 and start != stop:
        msg = "A single-point grid needs start == stop"
        raise GridSpecError(msg)
    return [float(tau) for tau in np.linspace(start, stop, count)]


def register(parser: argparse.ArgumentParser) -> None:
    """Register the command-line parser for the expectile curve.

    Args:
        parser: The argument parser to register the command with.
    """
    parser.add_argument("--input", required=True, type=Path, help="Path to a sample file or a JSON distribution file.")
    parser.add_argument(
        "--format",
        dest="input_format",
        choices=INPUT_FORMATS,
        default=None,
        help="Input format. Default: 'distribution' for .json files, 'samples' otherwise.",
    )
    parser.add_argument("--grid", required=True, help="Levels as start:stop:count, all inside (0, 0.5].")

    parser.set_defaults(func=main)


def validate_args(arguments: argparse.Namespace) -> CurveArgs | None:
    """Validate the arguments.

    Args:
        arguments: The parsed command-line arguments.

    Returns:
        CurveArgs | None: Validated arguments or None if validation fails.
    """
    input_path = Path(arguments.input)
    try:
        taus = parse_grid(arguments.grid)
    except GridSpecError as e:
        logger.error(str(e))
        return None

    return CurveArgs(input=input_path, input_format=arguments.input_format or infer_input_format(input_path), taus=taus)


def main(arguments: argparse.Namespace) -> None:
    """Print "tau,expectile" rows over the grid.

    Args:
        arguments: The parsed command-line arguments.
    """
    args = validate_args(arguments)

    if args is None:
        sys.exit(EXIT_USAGE_ERROR)

    try:
        law = load_law(args.input, args.input_format)
    except (InputFormatError, InvalidDistributionError) as e:
        logger.critical(f"Could not parse {args.input}: {e}")
        sys.exit(EXIT_PARSE_ERROR)
    except OSError as e:
        logger.critical(f"Could not read {args.input}: {e}")
        sys.exit(EXIT_PARSE_ERROR)

    curve = expectile_curve(law, [RiskLevel(tau) for tau in args.taus])
    lines = ["tau,expectile", *(f"{format_number(tau)},{format_number(value)}" for tau, value in curve)]
    sys.stdout.write("\n".join(lines) + "\n")
