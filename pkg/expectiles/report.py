"""Tabulate the expectile and its lower bounds for a distribution or a sample."""

import argparse
import json
import logging
import sys
import typing as t
from pathlib import Path

from expectiles import CSV_SIGNIFICANT_DIGITS, DEFAULT_TAUS, EXIT_AUDIT_FAILURE, EXIT_PARSE_ERROR, EXIT_USAGE_ERROR
from expectiles.dist_core import RiskLevel
from expectiles.distortion import sandwich_report
from expectiles.errors import InputFormatError, InvalidDistributionError, InvalidRiskLevelError
from expectiles.scenario import breakpoint_scan_argmin
from expectiles.typehints import (
    INPUT_FORMATS,
    OUTPUT_FORMATS,
    ReportArgs,
    ReportRow,
    infer_input_format,
    load_law,
    parse_taus,
)

if t.TYPE_CHECKING:
    from collections.abc import Sequence

    from expectiles.dist_core import DiscreteDistribution


logging.basicConfig(level=logging.INFO, format="%(levelname)s - %(message)s")
logger = logging.getLogger(__name__)

REPORT_COLUMNS: tuple[str, ...] = ("tau", "expectile", "comonotone_v", "e_sigma", "cvar_lb")


def report_rows(d: "DiscreteDistribution", levels: "Sequence[RiskLevel]") -> list[ReportRow]:
    """One report row per level, in the given order."""
    rows = []
    for level in levels:
        bounds = sandwich_report(d, level)
        rows.append(
            ReportRow(
                tau=level.tau,
                expectile=bounds.e_tau,
                comonotone_v=bounds.v,
                e_sigma=bounds.e_sigma,
                cvar_lb=bounds.cvar_lb,
            )
        )
    return rows


def report_meta(args: ReportArgs, d: "DiscreteDistribution", levels: "Sequence[RiskLevel]") -> dict[str, t.Any]:
    """Input description and breakpoint scan minimisers attached to the report."""
    return {
        "input": str(args.input),
        "format": args.input_format,
        "support_size": d.size,
        "scan_argmin": [{"tau": level.tau, "x": breakpoint_scan_argmin(d, level)[0]} for level in levels],
    }


def format_number(value: float) -> str:
    """Shortest-looking representation with enough digits to round-trip a double."""
    return f"{value:.{CSV_SIGNIFICANT_DIGITS}g}"


def format_csv(rows: "Sequence[ReportRow]", meta: dict[str, t.Any]) -> str:
    """Render the report as CSV preceded by '#' metadata lines."""
    lines = [
        f"# input={meta['input']}",
        f"# format={meta['format']}",
        f"# support_size={meta['support_size']}",
    ]
    lines.extend(
        f"# scan_argmin tau={format_number(entry['tau'])} x={format_number(entry['x'])}"
        for entry in meta["scan_argmin"]
    )
    lines.append(",".join(REPORT_COLUMNS))
    for row in rows:
        values = row.as_dict()
        lines.append(",".join(format_number(values[column]) for column in REPORT_COLUMNS))
    return "\n".join(lines) + "\n"


def format_json(rows: "Sequence[ReportRow]", meta: dict[str, t.Any]) -> str:
    """Render the report as a JSON object with sorted keys."""
    return json.dumps({"rows": [row.as_dict() for row in rows], "meta": meta}, indent=2, sort_keys=True) + "\n"


def register(parser: argparse.ArgumentParser) -> None:
    """Register the command-line parser for the risk report.

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
    parser.add_argument(
        "--tau",
        dest="taus",
        type=parse_taus,
        default=list(DEFAULT_TAUS),
        help=f"Comma-separated risk levels in (0, 0.5]. Default: {','.join(map(str, DEFAULT_TAUS))}",
    )
    parser.add_argument("--output", choices=OUTPUT_FORMATS, default="csv", help="Output format. Default: csv")

    parser.set_defaults(func=main)


def validate_args(arguments: argparse.Namespace) -> ReportArgs | None:
    """Validate the arguments.

    Args:
        arguments: The parsed command-line arguments.

    Returns:
        ReportArgs | None: Validated arguments or None if validation fails.
    """
    input_path = Path(arguments.input)
    args = ReportArgs(
        input=input_path,
        input_format=arguments.input_format or infer_input_format(input_path),
        taus=arguments.taus,
        output=arguments.output,
    )

    ret_args: ReportArgs | None = args

    for tau in args.taus:
        try:
            RiskLevel(tau)
        except InvalidRiskLevelError as e:
            logger.error(str(e))
            ret_args = None

    return ret_args


def main(arguments: argparse.Namespace) -> None:
    """Write one report row per risk level to standard output.

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

    levels = [RiskLevel(tau) for tau in args.taus]
    rows = report_rows(law, levels)
    meta = report_meta(args, law, levels)
    sys.stdout.write(format_csv(rows, meta) if args.output == "csv" else format_json(rows, meta))

    broken = [row.tau for row in rows if not row.satisfies_ordering()]
    if broken:
        logger.error(f"Bounds out of order at tau={broken}")
        sys.exit(EXIT_AUDIT_FAILURE)
