"""Finite probability spaces, random variables and their laws.

Every risk functional in this package consumes a `DiscreteDistribution`: a strictly increasing support with
strictly positive probabilities. Laws are always kept in this canonical form, so two laws are equal exactly when
their arrays are equal.
"""

import logging
import typing as t
from dataclasses import dataclass, field

import numpy as np

from expectiles import INPUT_NORMALIZATION_TOL, NORMALIZATION_TOL
from expectiles.errors import (
    BadNormalizationError,
    EmptySampleError,
    InvalidDistributionError,
    InvalidRiskLevelError,
    LengthMismatchError,
    NegativeScaleError,
    NonPositiveProbabilityError,
    NotMonotoneError,
    OutOfRangeError,
    SpaceMismatchError,
)

if t.TYPE_CHECKING:
    from collections.abc import Sequence

    from expectiles.typehints import FloatArray


logger = logging.getLogger(__name__)


def _frozen(values: "Sequence[float] | FloatArray") -> "FloatArray":
    """Copy values into a read-only float64 vector.

    Args:
        values: The values to copy.

    Returns:
        FloatArray: A one-dimensional array that cannot be written to.

    Raises:
        InvalidDistributionError: If the values are not a finite one-dimensional sequence.
    """
    try:
        array = np.array(values, dtype=np.float64)
    except (OverflowError, TypeError, ValueError) as e:
        msg = f"Values must be representable as floats: {e}"
        raise InvalidDistributionError(msg) from e
    if array.ndim != 1:
        msg = f"Expected a one-dimensional sequence, got shape {array.shape}"
        raise InvalidDistributionError(msg)
    if not np.all(np.isfinite(array)):
        msg = "Values must be finite"
        raise InvalidDistributionError(msg)
    array.setflags(write=False)
    return array


def _check_probabilities(probs: "FloatArray", tolerance: float) -> None:
    if probs.size == 0:
        msg = "At least one atom is required"
        raise InvalidDistributionError(msg)
    if np.any(probs <= 0.0):
        msg = f"Probabilities must be strictly positive, got minimum {probs.min()}"
        raise NonPositiveProbabilityError(msg)
    total = float(probs.sum())
    if abs(total - 1.0) > tolerance:
        msg = f"Probabilities sum to {total!r}, outside 1 ± {tolerance}"
        raise BadNormalizationError(msg)


@dataclass(frozen=True, slots=True, eq=False)
class FiniteProbabilitySpace:
    """A finite probability space with a fixed linear order on its atoms.

    Attributes:
        atom_probs (FloatArray): Probability of each atom, all strictly positive.
    """

    atom_probs: "FloatArray"

    def __post_init__(self) -> None:
        """Freeze and validate the atom probabilities."""
        probs = _frozen(self.atom_probs)
        _check_probabilities(probs, NORMALIZATION_TOL)
        object.__setattr__(self, "atom_probs", probs)

    @classmethod
    def uniform(cls, n_atoms: int) -> "FiniteProbabilitySpace":
        """Build a space of `n_atoms` equally likely atoms.

        Args:
            n_atoms (int): Number of atoms.

        Returns:
            FiniteProbabilitySpace: The uniform space.

        Raises:
            OutOfRangeError: If `n_atoms` is smaller than one.
        """
        if n_atoms < 1:
            msg = f"A probability space needs at least one atom, got {n_atoms}"
            raise OutOfRangeError(msg)
        return cls(np.full(n_atoms, 1.0 / n_atoms))

    @property
    def n_atoms(self) -> int:
        """Number of atoms."""
        return int(self.atom_probs.size)

    def __eq__(self, other: object) -> bool:
        """Spaces are equal when their atom probabilities are identical."""
        if not isinstance(other, FiniteProbabilitySpace):
            return NotImplemented
        return self is other or np.array_equal(self.atom_probs, other.atom_probs)

    def __hash__(self) -> int:
        """Hash the atom probabilities."""
        return hash(self.atom_probs.tobytes())


@dataclass(frozen=True, slots=True, eq=False)
class RandomVariable:
    """A real random variable on a finite probability space.

    Attributes:
        space (FiniteProbabilitySpace): The underlying space.
        values (FloatArray): The outcome on each atom, in atom order.
    """

    space: FiniteProbabilitySpace
    values: "FloatArray"

    def __post_init__(self) -> None:
        """Freeze the values and check they cover every atom."""
        values = _frozen(self.values)
        if values.size != self.space.n_atoms:
            msg = f"Got {values.size} values for {self.space.n_atoms} atoms"
            raise LengthMismatchError(msg)
        object.__setattr__(self, "values", values)

    def _same_space(self, other: "RandomVariable") -> None:
        if self.space != other.space:
            msg = "Random variables live on different probability spaces"
            raise SpaceMismatchError(msg)

    def __add__(self, other: "RandomVariable | float") -> "RandomVariable":
        """Add a random variable on the same space, or a constant."""
        if isinstance(other, RandomVariable):
            self._same_space(other)
            return RandomVariable(self.space, self.values + other.values)
        return RandomVariable(self.space, self.values + float(other))

    def __radd__(self, other: float) -> "RandomVariable":
        """Add a constant from the left."""
        return self + other

    def scaled(self, factor: float) -> "RandomVariable":
        """Multiply by a nonnegative constant.

        Args:
            factor (float): The scaling factor.

        Returns:
            RandomVariable: The scaled random variable.

        Raises:
            NegativeScaleError: If `factor` is negative.
        """
        if factor < 0:
            msg = f"Scale factor must be nonnegative, got {factor}"
            raise NegativeScaleError(msg)
        return RandomVariable(self.space, self.values * factor)


@dataclass(frozen=True, slots=True, eq=False)
class DiscreteDistribution:
    """The law of a bounded random variable with finite support.

    Attributes:
        outcomes (FloatArray): Strictly increasing support points.
        probs (FloatArray): Strictly positive probabilities summing to one.
        cumulative (FloatArray): Cumulative probabilities `p_1 < ... < p_n = 1`.
    """

    outcomes: "FloatArray"
    probs: "FloatArray"
    cumulative: "FloatArray" = field(init=False, repr=False)

    def __post_init__(self) -> None:
        """Freeze and validate the law, then cache its cumulative probabilities."""
        outcomes = _frozen(self.outcomes)
        probs = _frozen(self.probs)
        if outcomes.size != probs.size:
            msg = f"Got {outcomes.size} outcomes and {probs.size} probabilities"
            raise LengthMismatchError(msg)
        _check_probabilities(probs, NORMALIZATION_TOL)
        if np.any(np.diff(outcomes) <= 0.0):
            msg = "Outcomes must be strictly increasing"
            raise InvalidDistributionError(msg)

        cumulative = np.minimum(np.cumsum(probs), 1.0)
        cumulative[-1] = 1.0
        cumulative.setflags(write=False)

        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "cumulative", cumulative)

    @property
    def size(self) -> int:
        """Number of support points."""
        return int(self.outcomes.size)

    @property
    def is_point_mass(self) -> bool:
        """Whether the law is a Dirac mass."""
        return self.size == 1

    def __eq__(self, other: object) -> bool:
        """Laws are equal when their canonical forms are identical."""
        if not isinstance(other, DiscreteDistribution):
            return NotImplemented
        return np.array_equal(self.outcomes, other.outcomes) and np.array_equal(self.probs, other.probs)

    def __hash__(self) -> int:
        """Hash the canonical form."""
        return hash((self.outcomes.tobytes(), self.probs.tobytes()))


@dataclass(frozen=True, slots=True)
class RiskLevel:
    """The expectile level tau together with beta = (1 - tau) / tau.

    Attributes:
        tau (float): Level in (0, 1/2].
        beta (float): Derived ratio, at least one.
    """

    tau: float
    beta: float = field(init=False)

    def __post_init__(self) -> None:
        """Validate tau and derive beta.

        Raises:
            InvalidRiskLevelError: If tau is outside (0, 1/2].
        """
        if not (0.0 < self.tau <= 0.5):  # noqa: PLR2004
            msg = f"Risk level tau must lie in (0, 0.5], got {self.tau}"
            raise InvalidRiskLevelError(msg)
        object.__setattr__(self, "tau", float(self.tau))
        object.__setattr__(self, "beta", (1.0 - self.tau) / self.tau)

    @classmethod
    def from_beta(cls, beta: float) -> "RiskLevel":
        """Build the level whose ratio is `beta`.

        Args:
            beta (float): The ratio (1 - tau) / tau, at least one.

        Returns:
            RiskLevel: The level with tau = 1 / (1 + beta).

        Raises:
            InvalidRiskLevelError: If beta is smaller than one.
        """
        if beta < 1.0:
            msg = f"beta must be at least 1, got {beta}"
            raise InvalidRiskLevelError(msg)
        return cls(1.0 / (1.0 + beta))


def _canonical(values: "FloatArray", probs: "FloatArray") -> DiscreteDistribution:
    """Merge duplicate values, sort them and renormalise."""
    outcomes, inverse = np.unique(values, return_inverse=True)
    merged = np.bincount(inverse, weights=probs, minlength=outcomes.size)
    return DiscreteDistribution(outcomes, merged / merged.sum())


def from_atoms(values: "Sequence[float] | FloatArray", probs: "Sequence[float] | FloatArray") -> DiscreteDistribution:
    """Build a law from possibly unsorted and repeated atoms.

    Args:
        values: Outcome of each atom.
        probs: Probability of each atom.

    Returns:
        DiscreteDistribution: The canonical law, renormalised to sum exactly to one.

    Raises:
        LengthMismatchError: If the two sequences differ in length.
    """
    values_ = _frozen(values)
    probs_ = _frozen(probs)
    if values_.size != probs_.size:
        msg = f"Got {values_.size} values and {probs_.size} probabilities"
        raise LengthMismatchError(msg)
    _check_probabilities(probs_, INPUT_NORMALIZATION_TOL)
    law = _canonical(values_, probs_)
    if law.size < values_.size:
        logger.debug(f"Merged {values_.size - law.size} duplicate outcomes")
    return law


def from_samples(samples: "Sequence[float] | FloatArray") -> DiscreteDistribution:
    """Build the empirical law of a sample, each observation weighing 1/n.

    Args:
        samples: The observations.

    Returns:
        DiscreteDistribution: The empirical law.

    Raises:
        EmptySampleError: If no sample is given.
    """
    values = np.asarray(samples, dtype=np.float64)
    if values.size == 0:
        msg = "Cannot build an empirical law from an empty sample"
        raise EmptySampleError(msg)
    return from_atoms(values, np.full(values.size, 1.0 / values.size))


def point_mass(value: float) -> DiscreteDistribution:
    """Dirac law at `value`."""
    return DiscreteDistribution(np.array([value]), np.array([1.0]))


def indicator_law(prob: float) -> DiscreteDistribution:
    """Law of the indicator of an event with probability `prob`.

    Args:
        prob (float): Probability of the event, in [0, 1].

    Returns:
        DiscreteDistribution: Bernoulli law on {0, 1}; a point mass at the endpoints.

    Raises:
        OutOfRangeError: If `prob` is outside [0, 1].
    """
    if not (0.0 <= prob <= 1.0):
        msg = f"Event probability must lie in [0, 1], got {prob}"
        raise OutOfRangeError(msg)
    if prob in {0.0, 1.0}:
        return point_mass(prob)
    return DiscreteDistribution(np.array([0.0, 1.0]), np.array([1.0 - prob, prob]))


def law_of(rv: RandomVariable) -> DiscreteDistribution:
    """Push the atom probabilities forward through the values of `rv`."""
    return _canonical(rv.values, rv.space.atom_probs)


def quantile(d: DiscreteDistribution, u: float) -> float:
    """Left-continuous inverse of the distribution function, inf{x : F(x) >= u}.

    Args:
        d (DiscreteDistribution): The law.
        u (float): Level in (0, 1].

    Returns:
        float: The lower quantile at `u`.

    Raises:
        OutOfRangeError: If `u` is outside (0, 1].
    """
    if not (0.0 < u <= 1.0):
        msg = f"Quantile level must lie in (0, 1], got {u}"
        raise OutOfRangeError(msg)
    index = min(int(np.searchsorted(d.cumulative, u, side="left")), d.size - 1)
    return float(d.outcomes[index])


def quantile_steps(d: DiscreteDistribution) -> tuple["FloatArray", "FloatArray"]:
    """Piecewise-constant quantile function of `d`.

    Returns:
        tuple[FloatArray, FloatArray]: Breakpoints `0 = p_0 < ... < p_n = 1` and the value taken on each
        interval `(p_{i-1}, p_i]`.
    """
    return np.concatenate(([0.0], d.cumulative)), d.outcomes


def cdf(d: DiscreteDistribution, x: float) -> float:
    """Right-continuous distribution function P[X <= x]."""
    index = int(np.searchsorted(d.outcomes, x, side="right"))
    return 0.0 if index == 0 else float(d.cumulative[index - 1])


def mean(d: DiscreteDistribution) -> float:
    """Expected value."""
    return float(d.outcomes @ d.probs)


def ess_inf(d: DiscreteDistribution) -> float:
    """Smallest support point."""
    return float(d.outcomes[0])


def ess_sup(d: DiscreteDistribution) -> float:
    """Largest support point."""
    return float(d.outcomes[-1])


def tail_masses(d: DiscreteDistribution, alpha: float) -> "FloatArray":
    """Mass each outcome contributes to the lowest `alpha` fraction of the law."""
    return np.diff(np.minimum(d.cumulative, alpha), prepend=0.0)


def tail_expectation(d: DiscreteDistribution, alpha: float) -> float:
    """Average of the lowest `alpha` fraction of outcomes, (1/alpha) times the integral of q over [0, alpha].

    Args:
        d (DiscreteDistribution): The law.
        alpha (float): Threshold in [0, 1]. `alpha = 0` gives the essential infimum and `alpha = 1` the mean.

    Returns:
        float: The tail expectation.

    Raises:
        OutOfRangeError: If `alpha` is outside [0, 1].
    """
    if not (0.0 <= alpha <= 1.0):
        msg = f"Tail threshold must lie in [0, 1], got {alpha}"
        raise OutOfRangeError(msg)
    if alpha == 0.0:
        return ess_inf(d)
    if alpha == 1.0:
        return mean(d)
    return float(d.outcomes @ tail_masses(d, alpha)) / alpha


def shift(d: DiscreteDistribution, a: float) -> DiscreteDistribution:
    """Law of X + a."""
    return _canonical(d.outcomes + a, d.probs)


def scale(d: DiscreteDistribution, factor: float) -> DiscreteDistribution:
    """Law of factor * X for a nonnegative factor.

    Raises:
        NegativeScaleError: If `factor` is negative.
    """
    if factor < 0:
        msg = f"Scale factor must be nonnegative, got {factor}"
        raise NegativeScaleError(msg)
    return _canonical(d.outcomes * factor, d.probs)


def negate(d: DiscreteDistribution) -> DiscreteDistribution:
    """Law of -X."""
    return DiscreteDistribution(-d.outcomes[::-1], d.probs[::-1])


def comonotone_pair(
    space: FiniteProbabilitySpace, g1: "Sequence[float] | FloatArray", g2: "Sequence[float] | FloatArray"
) -> tuple[RandomVariable, RandomVariable]:
    """Build two random variables that are nondecreasing along the atom order, hence comonotone.

    Args:
        space (FiniteProbabilitySpace): The common space.
        g1: Values of the first variable, nondecreasing in atom order.
        g2: Values of the second variable, nondecreasing in atom order.

    Returns:
        tuple[RandomVariable, RandomVariable]: The comonotone pair.

    Raises:
        NotMonotoneError: If either sequence decreases somewhere.
    """
    first = RandomVariable(space, np.asarray(g1, dtype=np.float64))
    second = RandomVariable(space, np.asarray(g2, dtype=np.float64))
    for name, rv in (("g1", first), ("g2", second)):
        if np.any(np.diff(rv.values) < 0.0):
            msg = f"{name} is not nondecreasing along the atom order"
            raise NotMonotoneError(msg)
    return first, second


def is_comonotone(x: RandomVariable, y: RandomVariable) -> bool:
    """Check (x_i - x_j)(y_i - y_j) >= 0 for every pair of atoms.

    Raises:
        SpaceMismatchError: If the variables live on different spaces.
    """
    if x.space != y.space:
        msg = "Random variables live on different probability spaces"
        raise SpaceMismatchError(msg)
    dx = x.values[:, None] - x.values[None, :]
    dy = y.values[:, None] - y.values[None, :]
    return bool(np.all(dx * dy >= 0.0))


def refine(rv: RandomVariable, index: int) -> RandomVariable:
    """Split atom `index` into two atoms of half its probability carrying the same value.

    Args:
        rv (RandomVariable): The random variable to refine.
        index (int): The atom to split.

    Returns:
        RandomVariable: A random variable with the same law on a space with one more atom.

    Raises:
        OutOfRangeError: If `index` is not an atom of the space.
    """
    if not (0 <= index < rv.space.n_atoms):
        msg = f"Atom index {index} outside 0..{rv.space.n_atoms - 1}"
        raise OutOfRangeError(msg)
    probs = rv.space.atom_probs.copy()
    probs[index] /= 2.0
    probs = np.insert(probs, index + 1, probs[index])
    values = np.insert(rv.values, index + 1, rv.values[index])
    return RandomVariable(FiniteProbabilitySpace(probs), values)
