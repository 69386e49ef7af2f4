"""Distortion functions and Choquet integrals.

A convex distortion f induces the comonotone utility sum_i v_i (f(1 - p_{i-1}) - f(1 - p_i)) over ascending
outcomes. The distortion f(x) = x / (beta - (beta - 1) x) agrees with the expectile on indicators and gives the
greatest comonotone utility below it.
"""

import functools
import logging
import typing as t
from dataclasses import dataclass

import numpy as np

from expectiles import CONVEXITY_GRID, CONVEXITY_TOL, DERIVATIVE_STEP, F_TAU_CACHE_SIZE, NORMALIZATION_TOL
from expectiles.dist_core import RiskLevel, tail_expectation
from expectiles.errors import InvalidDistortionError, OutOfRangeError
from expectiles.expectile import SolverConfig, expectile

if t.TYPE_CHECKING:
    from collections.abc import Callable

    from expectiles.dist_core import DiscreteDistribution
    from expectiles.typehints import FloatArray

    DistortionFunction = Callable[[FloatArray], FloatArray]


logger = logging.getLogger(__name__)

_GRID = np.linspace(0.0, 1.0, CONVEXITY_GRID)


def _validation_error(evaluate: "DistortionFunction") -> str | None:
    """Describe why `evaluate` is not a convex distortion, or return None when it is."""
    endpoints = evaluate(np.array([0.0, 1.0]))
    if abs(endpoints[0]) > NORMALIZATION_TOL or abs(endpoints[1] - 1.0) > NORMALIZATION_TOL:
        return f"Distortion must satisfy f(0)=0 and f(1)=1, got f(0)={endpoints[0]!r}, f(1)={endpoints[1]!r}"

    values = evaluate(_GRID)
    if values.min() < -NORMALIZATION_TOL or values.max() > 1.0 + NORMALIZATION_TOL:
        return "Distortion must map [0, 1] into [0, 1]"
    second_differences = np.diff(values, n=2)
    if second_differences.min() < -CONVEXITY_TOL:
        worst = int(np.argmin(second_differences)) + 1
        return f"Distortion is not convex near y={_GRID[worst]}"
    return None


def is_valid_distortion(evaluate: "DistortionFunction") -> bool:
    """Whether `evaluate` passes the endpoint, range and grid convexity checks."""
    return _validation_error(evaluate) is None


@dataclass(frozen=True, slots=True)
class Distortion:
    """A convex distortion f: [0, 1] -> [0, 1] with f(0) = 0 and f(1) = 1.

    Attributes:
        evaluate (DistortionFunction): Vectorised evaluation of f on an array of points in [0, 1].
        label (str): Human-readable description.
    """

    evaluate: "DistortionFunction"
    label: str

    def __post_init__(self) -> None:
        """Check the distortion on the convexity grid.

        Raises:
            InvalidDistortionError: If the endpoint, range or convexity checks fail.
        """
        if (error := _validation_error(self.evaluate)) is not None:
            msg = f"{self.label}: {error}"
            raise InvalidDistortionError(msg)

    def __call__(self, y: float) -> float:
        """Evaluate f at a single point."""
        return float(self.evaluate(np.array([y]))[0])

    def derivative_bounds(self, step: float = DERIVATIVE_STEP) -> tuple[float, float]:
        """One-sided difference quotients: right derivative at 0 and left derivative at 1."""
        values = self.evaluate(np.array([0.0, step, 1.0 - step, 1.0]))
        return float((values[1] - values[0]) / step), float((values[3] - values[2]) / step)


def identity_distortion() -> Distortion:
    """The distortion f(y) = y, whose Choquet value is the mean."""
    return Distortion(lambda y: np.asarray(y, dtype=np.float64), "identity")


@functools.lru_cache(maxsize=F_TAU_CACHE_SIZE)
def f_tau(level: RiskLevel) -> Distortion:
    """Distortion x / (beta - (beta - 1) x) of the comonotone minorant at `level`."""
    beta = level.beta
    return Distortion(lambda y: y / (beta - (beta - 1.0) * y), f"f_tau(tau={level.tau})")


def f_tau_derivative(level: RiskLevel, y: float) -> float:
    """Exact derivative beta / (beta - (beta - 1) y)^2 of `f_tau`; 1/beta at 0 and beta at 1."""
    return level.beta / (level.beta - (level.beta - 1.0) * y) ** 2


def cvar_distortion(alpha: float) -> Distortion:
    """Piecewise-linear distortion max(y - (1 - alpha), 0) / alpha of the tail expectation at `alpha`.

    Raises:
        OutOfRangeError: If `alpha` is outside (0, 1].
    """
    if not (0.0 < alpha <= 1.0):
        msg = f"CVaR threshold must lie in (0, 1], got {alpha}"
        raise OutOfRangeError(msg)
    return Distortion(lambda y: np.maximum(y - (1.0 - alpha), 0.0) / alpha, f"cvar(alpha={alpha})")


def choquet_weights(d: "DiscreteDistribution", f: Distortion) -> "FloatArray":
    """Weight f(1 - p_{i-1}) - f(1 - p_i) of each ascending outcome; nonnegative and summing to one."""
    survival = 1.0 - np.concatenate(([0.0], d.cumulative))
    distorted = f.evaluate(survival)
    return distorted[:-1] - distorted[1:]


def choquet_value(d: "DiscreteDistribution", f: Distortion) -> float:
    """Choquet integral of `d` with respect to the distortion `f`, in quantile form."""
    return float(d.outcomes @ choquet_weights(d, f))


def comonotone_utility_v(d: "DiscreteDistribution", level: RiskLevel) -> float:
    """The greatest comonotone utility below the expectile, the Choquet value under `f_tau`."""
    return choquet_value(d, f_tau(level))


def sigma_of_tau(level: RiskLevel) -> RiskLevel:
    """Level sigma with (1 - sigma) / sigma = beta^2, so that e_sigma <= v <= e_tau."""
    return RiskLevel.from_beta(level.beta**2)


@dataclass(frozen=True, slots=True)
class SandwichReport:
    """Bounds around the expectile of one law.

    Attributes:
        e_tau (float): The expectile.
        v (float): The comonotone minorant.
        e_sigma (float): The expectile at the squared-ratio level.
        cvar_lb (float): The tail expectation at 1/beta.
    """

    e_tau: float
    v: float
    e_sigma: float
    cvar_lb: float

    def worst_slack(self) -> float:
        """Smallest margin among e_sigma <= v, v <= e_tau and cvar_lb <= e_tau."""
        return min(self.v - self.e_sigma, self.e_tau - self.v, self.e_tau - self.cvar_lb)


def sandwich_report(d: "DiscreteDistribution", level: RiskLevel, cfg: SolverConfig | None = None) -> SandwichReport:
    """Compute e_tau together with its comonotone, squared-level and tail-expectation lower bounds."""
    sigma = sigma_of_tau(level)
    report = SandwichReport(
        e_tau=expectile(d, level, cfg),
        v=comonotone_utility_v(d, level),
        e_sigma=expectile(d, sigma, cfg),
        cvar_lb=tail_expectation(d, 1.0 / level.beta),
    )
    logger.debug(f"Sandwich at tau={level.tau}, sigma={sigma.tau}: {report}")
    return report
