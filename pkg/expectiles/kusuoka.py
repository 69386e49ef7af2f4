"""Kusuoka representation of the expectile.

The expectile is the infimum of mixtures of tail expectations over probability measures nu on (0, 1] with
integral of 1/alpha against nu at most beta nu({1}). The infimum is attained at measures charging one alpha in
(0, 1) and the point 1, with the constraint active.
"""

import logging
import math
import typing as t
from dataclasses import dataclass

import numpy as np

from expectiles import DERIVATIVE_TOL, INPUT_NORMALIZATION_TOL, NORMALIZATION_TOL
from expectiles.dist_core import mean, tail_expectation
from expectiles.distortion import Distortion, is_valid_distortion
from expectiles.errors import InvalidMeasureError, OutOfRangeError

if t.TYPE_CHECKING:
    from collections.abc import Iterable

    from expectiles.dist_core import DiscreteDistribution, RiskLevel
    from expectiles.typehints import FloatArray


logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True, eq=False)
class KusuokaMeasure:
    """A probability measure on (0, 1] with finitely many atoms.

    The atom at alpha = 1 is always stored, possibly with zero weight, because admissibility refers to it.

    Attributes:
        alphas (FloatArray): Strictly increasing thresholds in (0, 1], the last one equal to 1.
        weights (FloatArray): Mass of each threshold, positive below 1 and summing to one.
    """

    alphas: "FloatArray"
    weights: "FloatArray"

    def __post_init__(self) -> None:
        """Freeze and validate the atoms.

        Raises:
            InvalidMeasureError: If the thresholds or weights violate the invariants.
        """
        alphas = np.array(self.alphas, dtype=np.float64)
        weights = np.array(self.weights, dtype=np.float64)
        if alphas.ndim != 1 or alphas.shape != weights.shape or alphas.size == 0:
            msg = "Thresholds and weights must be nonempty vectors of equal length"
            raise InvalidMeasureError(msg)
        if alphas[-1] != 1.0 or alphas[0] <= 0.0 or np.any(np.diff(alphas) <= 0.0):
            msg = "Thresholds must be distinct, increasing, inside (0, 1] and end at 1"
            raise InvalidMeasureError(msg)
        if np.any(weights[:-1] <= 0.0) or weights[-1] < 0.0:
            msg = "Weights must be positive (the mass at 1 may be zero)"
            raise InvalidMeasureError(msg)
        if abs(float(weights.sum()) - 1.0) > NORMALIZATION_TOL:
            msg = f"Weights sum to {weights.sum()!r}, not 1"
            raise InvalidMeasureError(msg)
        alphas.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_pairs(cls, pairs: "Iterable[tuple[float, float]]") -> "KusuokaMeasure":
        """Build a measure from (alpha, weight) pairs in any order.

        Duplicate thresholds are merged, zero weights dropped, and the weights renormalised when they sum to one
        within the input tolerance.

        Raises:
            InvalidMeasureError: If a threshold is outside (0, 1], a weight is negative, or the weights do not
                sum to one.
        """
        merged: dict[float, float] = {1.0: 0.0}
        for alpha, weight in pairs:
            if not (0.0 < alpha <= 1.0) or weight < 0.0:
                msg = f"Invalid atom ({alpha}, {weight}): need alpha in (0, 1] and a nonnegative weight"
                raise InvalidMeasureError(msg)
            merged[float(alpha)] = merged.get(float(alpha), 0.0) + float(weight)

        total = sum(merged.values())
        if abs(total - 1.0) > INPUT_NORMALIZATION_TOL:
            msg = f"Weights sum to {total!r}, not 1"
            raise InvalidMeasureError(msg)
        kept = sorted((alpha, weight) for alpha, weight in merged.items() if weight > 0.0 or alpha == 1.0)
        return cls(np.array([a for a, _ in kept]), np.array([w for _, w in kept]) / total)

    @property
    def mass_at_one(self) -> float:
        """nu({1})."""
        return float(self.weights[-1])

    @property
    def atoms(self) -> list[tuple[float, float]]:
        """The (alpha, weight) pairs with positive weight."""
        return [(float(a), float(w)) for a, w in zip(self.alphas, self.weights, strict=True) if w > 0.0]


def is_admissible(nu: KusuokaMeasure, level: "RiskLevel") -> bool:
    """Whether the integral of 1/alpha against nu is at most beta nu({1})."""
    return float(nu.weights @ (1.0 / nu.alphas)) <= level.beta * nu.mass_at_one + NORMALIZATION_TOL


def mixture_value(d: "DiscreteDistribution", nu: KusuokaMeasure) -> float:
    """Mixture of tail expectations, the integral of u_alpha(d) against nu."""
    return sum(weight * tail_expectation(d, alpha) for alpha, weight in nu.atoms)


def distortion_from_measure(nu: KusuokaMeasure) -> Distortion:
    """Distortion f(y) = sum over atoms of nu of weight (alpha + y - 1)^+ / alpha.

    The Choquet value under f equals `mixture_value` for every law; f is piecewise linear with kinks at 1 - alpha.
    """
    offsets = 1.0 - nu.alphas
    slopes = nu.weights / nu.alphas

    def evaluate(y: "FloatArray") -> "FloatArray":
        y = np.asarray(y, dtype=np.float64)
        result: FloatArray = np.maximum(y[..., None] - offsets, 0.0) @ slopes
        return result

    return Distortion(evaluate, f"kusuoka({nu.atoms})")


def two_point_measure(alpha: float, level: "RiskLevel") -> KusuokaMeasure:
    """Admissible measure lambda delta_alpha + (1 - lambda) delta_1 with the constraint active.

    lambda = (beta - 1) alpha / (1 + (beta - 1) alpha). At tau = 1/2 this is delta_1.

    Raises:
        OutOfRangeError: If `alpha` is outside (0, 1).
    """
    if not (0.0 < alpha < 1.0):
        msg = f"alpha must lie in (0, 1), got {alpha}"
        raise OutOfRangeError(msg)
    excess = level.beta - 1.0
    weight = excess * alpha / (1.0 + excess * alpha)
    if weight == 0.0:
        return KusuokaMeasure(np.array([1.0]), np.array([1.0]))
    return KusuokaMeasure(np.array([alpha, 1.0]), np.array([weight, 1.0 - weight]))


def scan_points(d: "DiscreteDistribution") -> list[float]:
    """Cumulative probabilities of `d` strictly inside (0, 1), followed by 1."""
    return [float(p) for p in d.cumulative[:-1] if 0.0 < p < 1.0] + [1.0]


def kusuoka_argmin(d: "DiscreteDistribution", level: "RiskLevel") -> tuple[KusuokaMeasure, float]:
    """Two-point measure attaining the Kusuoka infimum, scanning thresholds at the cumulative probabilities.

    Returns:
        tuple[KusuokaMeasure, float]: The minimising measure (smallest alpha on ties) and the minimum.
    """
    dirac_one = KusuokaMeasure(np.array([1.0]), np.array([1.0]))
    best_measure, best_value = dirac_one, math.inf
    # Ascending thresholds and a strict comparison: ties go to the smallest alpha.
    for alpha in scan_points(d):
        nu = two_point_measure(alpha, level) if alpha < 1.0 else dirac_one
        value = mixture_value(d, nu) if alpha < 1.0 else mean(d)
        if value < best_value:
            best_measure, best_value = nu, value
    logger.debug(f"Kusuoka scan minimum {best_value} at {best_measure.atoms}")
    return best_measure, best_value


def expectile_via_kusuoka(d: "DiscreteDistribution", level: "RiskLevel") -> float:
    """Expectile as the smallest mixture of tail expectations over admissible two-point measures."""
    return kusuoka_argmin(d, level)[1]


def in_f_beta(f: Distortion, level: "RiskLevel") -> bool:
    """Whether `f` is a convex distortion with f'(1) <= beta f'(0), using one-sided difference quotients."""
    if not is_valid_distortion(f.evaluate):
        return False
    right_at_zero, left_at_one = f.derivative_bounds()
    return left_at_one <= level.beta * right_at_zero + DERIVATIVE_TOL


def random_admissible_measure(rng: np.random.Generator, level: "RiskLevel", max_atoms: int = 6) -> KusuokaMeasure:
    """Draw an admissible measure with at most `max_atoms` atoms, one of them at 1.

    Thresholds below 1 are uniform on [0.01, 1); the mass at 1 is then raised above the admissibility minimum
    by a random factor.
    """
    if level.beta == 1.0 or max_atoms < 2:  # noqa: PLR2004
        return KusuokaMeasure(np.array([1.0]), np.array([1.0]))
    count = int(rng.integers(1, max_atoms))
    alphas = rng.uniform(0.01, 1.0, size=count)
    raw = rng.uniform(0.1, 1.0, size=count)
    at_one = float(raw @ (1.0 / alphas)) / (level.beta - 1.0) * (1.0 + rng.uniform(0.0, 1.0))
    total = float(raw.sum()) + at_one
    pairs = [(float(a), float(w) / total) for a, w in zip(alphas, raw, strict=True)]
    return KusuokaMeasure.from_pairs([*pairs, (1.0, at_one / total)])
