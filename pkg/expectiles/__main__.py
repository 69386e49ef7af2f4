"""Compute expectile risk reports and audit their properties."""

import argparse
import sys
import typing as t

from expectiles import EXIT_USAGE_ERROR

from .audit import register as register_audit
from .curve import register as register_curve
from .report import register as register_report


class UsageErrorParser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with `EXIT_USAGE_ERROR`, keeping 2 for unreadable input."""

    def error(self, message: str) -> t.NoReturn:
        """Print the usage and exit with the usage error code."""
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE_ERROR, f"{self.prog}: error: {message}\n")


def main(args: list[str] | None = None) -> None:
    """Main CLI entry point for expectiles."""
    parser = UsageErrorParser(description="Expectile risk measures on finite distributions.", prog="expectiles")
    subparsers = parser.add_subparsers(help="Command to run")
    register_report(
        subparsers.add_parser(
            "report",
            description="Tabulate the expectile with its comonotone, squared-level and tail-expectation bounds.",
            help="Write a risk report",
        )
    )
    register_audit(
        subparsers.add_parser(
            "audit",
            description="Check the properties of every algorithm on seeded random fixtures.",
            help="Run the audit",
        )
    )
    register_curve(
        subparsers.add_parser(
            "curve", description="Emit the expectile over a grid of tau.", help="Emit an expectile curve"
        )
    )
    parsed_args = parser.parse_args(args)
    if hasattr(parsed_args, "func"):
        parsed_args.func(parsed_args)
    else:
        parser.print_usage()
        sys.exit(EXIT_USAGE_ERROR)


def report_command() -> None:
    """Run the risk report command."""
    main(["report", *sys.argv[1:]])


def audit_command() -> None:
    """Run the property audit command."""
    main(["audit", *sys.argv[1:]])


def curve_command() -> None:
    """Run the expectile curve command."""
    main(["curve", *sys.argv[1:]])


if __name__ == "__main__":
    main()
