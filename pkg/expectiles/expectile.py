"""The expectile functional: asymmetric quadratic score, first-order condition, acceptance margin and solvers."""

import logging
import math
import typing as t
from dataclasses import dataclass

import numpy as np

from expectiles import DEFAULT_MAX_ITER, DEFAULT_REL_TOL, NORMALIZATION_TOL
from expectiles.dist_core import ess_inf, ess_sup, negate, shift
from expectiles.errors import MaxIterExceededError, OutOfRangeError

if t.TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    from expectiles.dist_core import DiscreteDistribution, RiskLevel

    FirstOrder = Callable[[DiscreteDistribution, RiskLevel, float], float]


logger = logging.getLogger(__name__)

INVERSE_GOLDEN_RATIO: float = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, slots=True)
class SolverConfig:
    """Stopping rule shared by the bracketing solvers.

    Attributes:
        abs_tol (float): Width, in outcome units, below which the bracket is accepted.
        max_iter (int): Maximum number of bracket reductions.
    """

    abs_tol: float
    max_iter: int = DEFAULT_MAX_ITER

    def __post_init__(self) -> None:
        """Validate the stopping rule.

        Raises:
            OutOfRangeError: If `abs_tol` is not positive or `max_iter` is smaller than one.
        """
        if not self.abs_tol > 0.0:
            msg = f"abs_tol must be positive, got {self.abs_tol}"
            raise OutOfRangeError(msg)
        if self.max_iter < 1:
            msg = f"max_iter must be at least 1, got {self.max_iter}"
            raise OutOfRangeError(msg)

    @classmethod
    def for_law(cls, d: "DiscreteDistribution") -> "SolverConfig":
        """Default configuration, with a tolerance relative to the magnitude of the support."""
        scale = max(1.0, abs(ess_inf(d)), abs(ess_sup(d)))
        return cls(abs_tol=DEFAULT_REL_TOL * scale, max_iter=DEFAULT_MAX_ITER)


def phi_score(d: "DiscreteDistribution", level: "RiskLevel", l: float) -> float:  # noqa: E741
    """Asymmetric quadratic score tau E[((X - l)^+)^2] + (1 - tau) E[((l - X)^+)^2].

    Args:
        d (DiscreteDistribution): The law of X.
        level (RiskLevel): The risk level.
        l (float): The candidate value.

    Returns:
        float: The score, strictly convex in `l`.
    """
    upper = np.maximum(d.outcomes - l, 0.0)
    lower = np.maximum(l - d.outcomes, 0.0)
    return float(level.tau * (d.probs @ upper**2) + (1.0 - level.tau) * (d.probs @ lower**2))


def _score_gap(d: "DiscreteDistribution", level: "RiskLevel", a: float, b: float) -> float:
    """Score difference phi(b) - phi(a), free of the cancellation of subtracting two scores.

    Each squared term is factored as (s - r)(s + r); where both parts are active, s - r is taken as the exact
    difference of the two candidates rather than of two rounded distances.
    """
    x = d.outcomes
    up_b = np.maximum(x - b, 0.0)
    up_a = np.maximum(x - a, 0.0)
    up_diff = np.where((x > a) & (x > b), a - b, up_b - up_a)
    low_b = np.maximum(b - x, 0.0)
    low_a = np.maximum(a - x, 0.0)
    low_diff = np.where((x < a) & (x < b), b - a, low_b - low_a)
    return float(
        level.tau * (d.probs @ (up_diff * (up_b + up_a))) + (1.0 - level.tau) * (d.probs @ (low_diff * (low_b + low_a)))
    )


def foc(d: "DiscreteDistribution", level: "RiskLevel", l: float) -> float:  # noqa: E741
    """First-order function g(l) = (1 - tau) E[(l - X)^+] - tau E[(X - l)^+].

    g is nondecreasing, strictly increasing on [ess_inf, ess_sup], and vanishes exactly at the expectile.
    """
    below = d.probs @ np.maximum(l - d.outcomes, 0.0)
    above = d.probs @ np.maximum(d.outcomes - l, 0.0)
    return float((1.0 - level.tau) * below - level.tau * above)


def first_order_as_printed(d: "DiscreteDistribution", level: "RiskLevel", l: float) -> float:  # noqa: E741
    """The equation tau E[(l - X)^+] - (1 - tau) E[(l - X)^-] with the weights swapped relative to `foc`.

    Also nondecreasing, but its root is the upper expectile at 1 - tau, not the expectile at tau.
    """
    below = d.probs @ np.maximum(l - d.outcomes, 0.0)
    above = d.probs @ np.maximum(d.outcomes - l, 0.0)
    return float(level.tau * below - (1.0 - level.tau) * above)


def acceptance_margin(d: "DiscreteDistribution", level: "RiskLevel") -> float:
    """Margin tau E[X^+] - (1 - tau) E[X^-] of the acceptance set; X is acceptable when it is nonnegative."""
    positive = d.probs @ np.maximum(d.outcomes, 0.0)
    negative = d.probs @ np.maximum(-d.outcomes, 0.0)
    return float(level.tau * positive - (1.0 - level.tau) * negative)


def is_acceptable(d: "DiscreteDistribution", level: "RiskLevel") -> bool:
    """Whether X belongs to the acceptance set of the expectile."""
    return acceptance_margin(d, level) >= -NORMALIZATION_TOL


def _bisect(
    d: "DiscreteDistribution", level: "RiskLevel", cfg: SolverConfig, first_order: "FirstOrder"
) -> tuple[float, int]:
    """Bisect a nondecreasing function of l over [ess_inf, ess_sup].

    The bracket [lo, hi] keeps first_order(lo) <= 0 <= first_order(hi) throughout.

    Returns:
        tuple[float, int]: Midpoint of the final bracket and the number of halvings.

    Raises:
        MaxIterExceededError: If the bracket is still wider than `abs_tol` after `max_iter` halvings.
    """
    lo, hi = ess_inf(d), ess_sup(d)
    iterations = 0
    while hi - lo > cfg.abs_tol:
        if iterations == cfg.max_iter:
            msg = f"Bisection bracket [{lo!r}, {hi!r}] still wider than {cfg.abs_tol} after {iterations} halvings"
            raise MaxIterExceededError(msg)
        iterations += 1
        mid = 0.5 * (lo + hi)
        value = first_order(d, level, mid)
        if value == 0.0:
            return mid, iterations
        if value < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), iterations


def expectile(
    d: "DiscreteDistribution",
    level: "RiskLevel",
    cfg: SolverConfig | None = None,
    *,
    first_order: "FirstOrder" = foc,
) -> float:
    """Expectile of `d` at `level`, by bisection on the first-order function.

    Args:
        d (DiscreteDistribution): The law.
        level (RiskLevel): The risk level.
        cfg (SolverConfig | None): Stopping rule; defaults to `SolverConfig.for_law(d)`.
        first_order (FirstOrder): Nondecreasing function whose root is sought. Only tests replace it.

    Returns:
        float: The expectile, within `abs_tol` of the root. Point masses return their point exactly.
    """
    if d.is_point_mass:
        return ess_inf(d)
    cfg = cfg or SolverConfig.for_law(d)
    root, iterations = _bisect(d, level, cfg, first_order)
    logger.debug(f"Bisection converged in {iterations} halvings for tau={level.tau}")
    return root


def expectile_argmin(d: "DiscreteDistribution", level: "RiskLevel", cfg: SolverConfig | None = None) -> float:
    """Expectile of `d` as the minimiser of the score, by golden-section search.

    Comparisons use the score difference rather than two rounded scores, so the bracket resolves to `abs_tol`
    although the score is flat near its minimum.

    Args:
        d (DiscreteDistribution): The law.
        level (RiskLevel): The risk level.
        cfg (SolverConfig | None): Stopping rule; defaults to `SolverConfig.for_law(d)`.

    Returns:
        float: The minimiser, within `abs_tol` of the expectile.

    Raises:
        MaxIterExceededError: If the bracket fails to shrink below `abs_tol` within `max_iter` steps.
    """
    if d.is_point_mass:
        return ess_inf(d)
    cfg = cfg or SolverConfig.for_law(d)

    lo, hi = ess_inf(d), ess_sup(d)
    left = hi - INVERSE_GOLDEN_RATIO * (hi - lo)
    right = lo + INVERSE_GOLDEN_RATIO * (hi - lo)
    iterations = 0
    while hi - lo > cfg.abs_tol:
        if iterations == cfg.max_iter:
            msg = f"Golden-section bracket [{lo!r}, {hi!r}] still wider than {cfg.abs_tol} after {iterations} steps"
            raise MaxIterExceededError(msg)
        iterations += 1
        if _score_gap(d, level, left, right) > 0.0:
            hi, right = right, left
            left = hi - INVERSE_GOLDEN_RATIO * (hi - lo)
        else:
            lo, left = left, right
            right = lo + INVERSE_GOLDEN_RATIO * (hi - lo)

    logger.debug(f"Golden-section search converged in {iterations} steps for tau={level.tau}")
    return 0.5 * (lo + hi)


def _negated_margin(d: "DiscreteDistribution", level: "RiskLevel", x: float) -> float:
    return -acceptance_margin(shift(d, -x), level)


def expectile_via_acceptance(
    d: "DiscreteDistribution", level: "RiskLevel", cfg: SolverConfig | None = None
) -> float:
    """Expectile as the largest x such that X - x is acceptable."""
    return expectile(d, level, cfg, first_order=_negated_margin)


def upper_expectile(d: "DiscreteDistribution", level: "RiskLevel", cfg: SolverConfig | None = None) -> float:
    """Expectile at 1 - tau, computed as -e_tau(-X)."""
    negated = negate(d)
    return -expectile(negated, level, cfg or SolverConfig.for_law(negated))


def expectile_curve(
    d: "DiscreteDistribution", levels: "Sequence[RiskLevel]", cfg: SolverConfig | None = None
) -> list[tuple[float, float]]:
    """Expectile of `d` at each level, as (tau, value) pairs in the given order.

    Raises:
        OutOfRangeError: If no level is given.
    """
    if not levels:
        msg = "At least one risk level is required"
        raise OutOfRangeError(msg)
    return [(level.tau, expectile(d, level, cfg)) for level in levels]
