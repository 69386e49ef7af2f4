"""Typehints, shared records and input loaders."""

import argparse
import json
import math
import typing as t
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
import numpy.typing as npt

from expectiles import SLACK
from expectiles.dist_core import from_atoms, from_samples
from expectiles.errors import InputFormatError

if t.TYPE_CHECKING:
    from expectiles.dist_core import DiscreteDistribution

FloatArray = npt.NDArray[np.float64]
BoolArray = npt.NDArray[np.bool_]

INPUT_FORMAT = t.Literal["samples", "distribution"]
OUTPUT_FORMAT = t.Literal["csv", "json"]

INPUT_FORMATS: list[str] = list(t.get_args(INPUT_FORMAT))
OUTPUT_FORMATS: list[str] = list(t.get_args(OUTPUT_FORMAT))


class RawDistribution(t.TypedDict):
    """Distribution file contents.

    Attributes:
        outcomes (list[float]): Outcome of each atom.
        probs (list[float]): Probability of each atom.
    """

    outcomes: list[float]
    probs: list[float]


def parse_distribution(raw: object) -> "DiscreteDistribution":
    """Convert decoded JSON into a law.

    Args:
        raw (object): The decoded JSON document.

    Returns:
        DiscreteDistribution: The canonical law.

    Raises:
        InputFormatError: If the document is not an object with numeric `outcomes` and `probs` arrays.
    """
    if not isinstance(raw, dict) or not {"outcomes", "probs"} <= raw.keys():
        msg = 'Expected a JSON object with "outcomes" and "probs" arrays'
        raise InputFormatError(msg)

    for key in ("outcomes", "probs"):
        values = raw[key]
        if not isinstance(values, list) or not all(
            isinstance(v, int | float) and not isinstance(v, bool) for v in values
        ):
            msg = f'"{key}" must be an array of numbers'
            raise InputFormatError(msg)

    document = t.cast("RawDistribution", raw)
    return from_atoms(document["outcomes"], document["probs"])


def load_distribution(file: Path) -> "DiscreteDistribution":
    """Load a law from a JSON distribution file.

    Args:
        file (Path): Path to the JSON file.

    Returns:
        DiscreteDistribution: The canonical law.

    Raises:
        InputFormatError: If the file is not UTF-8 JSON or has the wrong shape.
    """
    try:
        with file.open(encoding="utf-8") as f:
            raw = json.load(f)
    except json.JSONDecodeError as e:
        msg = f"{file} is not valid JSON: {e}"
        raise InputFormatError(msg) from e
    except UnicodeDecodeError as e:
        msg = f"{file} is not valid UTF-8: {e}"
        raise InputFormatError(msg) from e

    return parse_distribution(raw)


def load_samples(file: Path) -> "DiscreteDistribution":
    """Load the empirical law of a sample file, one decimal number per line.

    Everything after a '#' on a line is a comment; blank lines are skipped.

    Args:
        file (Path): Path to the sample file.

    Returns:
        DiscreteDistribution: The empirical law.

    Raises:
        InputFormatError: If the file is not UTF-8 or a line is not a finite decimal number.
    """
    try:
        text = file.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        msg = f"{file} is not valid UTF-8: {e}"
        raise InputFormatError(msg) from e

    samples: list[float] = []
    for number, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        try:
            value = float(content)
        except ValueError as e:
            msg = f"{file}:{number}: not a number: {content!r}"
            raise InputFormatError(msg) from e
        if not math.isfinite(value):
            msg = f"{file}:{number}: value must be finite, got {content!r}"
            raise InputFormatError(msg)
        samples.append(value)

    return from_samples(samples)


def parse_taus(text: str) -> list[float]:
    """Parse a comma-separated list of risk levels for argparse.

    Range checks are left to the commands so that they can report every bad value.

    Raises:
        argparse.ArgumentTypeError: If the list is empty or an entry is not a number.
    """
    try:
        taus = [float(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        msg = f"invalid tau list {text!r}: {e}"
        raise argparse.ArgumentTypeError(msg) from e
    if not taus:
        msg = "at least one tau is required"
        raise argparse.ArgumentTypeError(msg)
    return taus


def infer_input_format(file: Path) -> INPUT_FORMAT:
    """Guess the input format from the file suffix: `.json` files hold distributions."""
    return "distribution" if file.suffix.lower() == ".json" else "samples"


def load_law(file: Path, input_format: INPUT_FORMAT) -> "DiscreteDistribution":
    """Load a law in the given input format."""
    if input_format == "distribution":
        return load_distribution(file)
    return load_samples(file)


@dataclass(frozen=True, slots=True)
class ReportRow:
    """One row of the risk report.

    Attributes:
        tau (float): The risk level.
        expectile (float): The expectile at `tau`.
        comonotone_v (float): The greatest comonotone minorant.
        e_sigma (float): The expectile at the squared-ratio level sigma.
        cvar_lb (float): The tail expectation at threshold 1/beta.
    """

    tau: float
    expectile: float
    comonotone_v: float
    e_sigma: float
    cvar_lb: float

    def satisfies_ordering(self, slack: float = SLACK) -> bool:
        """Check e_sigma <= comonotone_v <= expectile and cvar_lb <= expectile, up to `slack`."""
        return (
            self.e_sigma <= self.comonotone_v + slack
            and self.comonotone_v <= self.expectile + slack
            and self.cvar_lb <= self.expectile + slack
        )

    def as_dict(self) -> dict[str, float]:
        """Fields as a plain dictionary."""
        return asdict(self)


@dataclass(frozen=True, slots=True)
class AuditResult:
    """Outcome of one property check.

    Attributes:
        check_name (str): Name of the check.
        trials (int): Number of instances checked.
        failures (int): Number of instances violating the property.
        worst_slack (float): Smallest margin by which the property held (negative when violated).
    """

    check_name: str
    trials: int
    failures: int
    worst_slack: float

    @property
    def passed(self) -> bool:
        """Whether every trial passed."""
        return self.failures == 0

    def format_line(self) -> str:
        """One whitespace-separated line: name, trials, failures, worst slack, status."""
        status = "ok" if self.passed else "FAIL"
        return (
            f"{self.check_name} trials={self.trials} failures={self.failures}"
            f" worst_slack={self.worst_slack:.6e} {status}"
        )


@dataclass(slots=True)
class ReportArgs:
    """Arguments for the risk report.

    Attributes:
        input (Path): Path to the input file.
        input_format (INPUT_FORMAT): Whether the file holds samples or a distribution.
        taus (list[float]): Risk levels to tabulate.
        output (OUTPUT_FORMAT): Output format.
    """

    input: Path
    input_format: INPUT_FORMAT
    taus: list[float]
    output: OUTPUT_FORMAT


@dataclass(slots=True)
class AuditArgs:
    """Arguments for the property audit.

    Attributes:
        seed (int): Seed of the random fixtures.
        trials (int): Number of random instances per check.
        taus (list[float]): Risk levels swept by the checks.
    """

    seed: int
    trials: int
    taus: list[float]


@dataclass(slots=True)
class CurveArgs:
    """Arguments for the expectile curve.

    Attributes:
        input (Path): Path to the input file.
        input_format (INPUT_FORMAT): Whether the file holds samples or a distribution.
        taus (list[float]): The tau grid, ascending.
    """

    input: Path
    input_format: INPUT_FORMAT
    taus: list[float]
