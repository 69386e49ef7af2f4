"""Scenario-set view of the expectile.

The expectile is the smallest expectation over densities whose largest value is at most beta times their smallest.
The infimum is attained on two-valued extreme densities a 1_A + beta a 1_{A^c}, which gives an exact subset
enumeration for small spaces and, after rearranging quantiles, an exact scan over cumulative probabilities.
"""

import logging
import typing as t
from dataclasses import dataclass

import numpy as np

from expectiles import MAX_SUBSET_ATOMS, NORMALIZATION_TOL
from expectiles.dist_core import law_of, quantile
from expectiles.errors import (
    BadNormalizationError,
    EmptyOrFullSubsetError,
    LengthMismatchError,
    NonPositiveProbabilityError,
    OutOfRangeError,
    SpaceMismatchError,
    TooManyAtomsError,
)

if t.TYPE_CHECKING:
    from collections.abc import Iterator

    from expectiles.dist_core import DiscreteDistribution, FiniteProbabilitySpace, RandomVariable, RiskLevel
    from expectiles.typehints import BoolArray, FloatArray


logger = logging.getLogger(__name__)

# Number of subsets evaluated per vectorised block.
SUBSET_BLOCK: int = 1 << 14


@dataclass(frozen=True, slots=True, eq=False)
class ScenarioDensity:
    """A Radon-Nikodym density dQ/dP on a finite space.

    Attributes:
        space (FiniteProbabilitySpace): The space the density lives on.
        density (FloatArray): Strictly positive value on each atom, with P-expectation one.
    """

    space: "FiniteProbabilitySpace"
    density: "FloatArray"

    def __post_init__(self) -> None:
        """Freeze and validate the density."""
        density = np.array(self.density, dtype=np.float64)
        if density.shape != (self.space.n_atoms,):
            msg = f"Got {density.size} density values for {self.space.n_atoms} atoms"
            raise LengthMismatchError(msg)
        if np.any(density <= 0.0):
            msg = "Scenario densities must be strictly positive"
            raise NonPositiveProbabilityError(msg)
        total = float(density @ self.space.atom_probs)
        if abs(total - 1.0) > NORMALIZATION_TOL:
            msg = f"Density integrates to {total!r}, not 1"
            raise BadNormalizationError(msg)
        density.setflags(write=False)
        object.__setattr__(self, "density", density)


@dataclass(frozen=True, slots=True)
class SubsetSpec:
    """A set A of atom indices.

    Attributes:
        members (frozenset[int]): The atoms in A.
    """

    members: frozenset[int]

    def __post_init__(self) -> None:
        """Reject the empty set.

        Raises:
            EmptyOrFullSubsetError: If A has no member.
        """
        if not self.members:
            msg = "The subset A must be nonempty"
            raise EmptyOrFullSubsetError(msg)

    def mask(self, space: "FiniteProbabilitySpace") -> "BoolArray":
        """Boolean membership mask of A over the atoms of `space`.

        Raises:
            EmptyOrFullSubsetError: If A is not a proper subset of the atoms.
        """
        if min(self.members) < 0 or max(self.members) >= space.n_atoms:
            msg = f"Subset {sorted(self.members)} is not contained in 0..{space.n_atoms - 1}"
            raise EmptyOrFullSubsetError(msg)
        if len(self.members) == space.n_atoms:
            msg = "The subset A must have a nonempty complement"
            raise EmptyOrFullSubsetError(msg)
        mask = np.zeros(space.n_atoms, dtype=bool)
        mask[list(self.members)] = True
        return mask


def extreme_density(space: "FiniteProbabilitySpace", subset: SubsetSpec, level: "RiskLevel") -> ScenarioDensity:
    """Extreme density a 1_A + beta a 1_{A^c}, with a = 1 / (beta + P[A](1 - beta)).

    Args:
        space (FiniteProbabilitySpace): The space.
        subset (SubsetSpec): The set A, proper and nonempty.
        level (RiskLevel): The risk level.

    Returns:
        ScenarioDensity: The two-valued density.
    """
    mask = subset.mask(space)
    prob_a = float(space.atom_probs[mask].sum())
    a = 1.0 / (level.beta + prob_a * (1.0 - level.beta))
    return ScenarioDensity(space, np.where(mask, a, level.beta * a))


def density_lower_bound(level: "RiskLevel") -> float:
    """Lower bound 1/beta shared by every density of the scenario set."""
    return 1.0 / level.beta


def is_in_scenario_set(h: ScenarioDensity, level: "RiskLevel") -> bool:
    """Whether max(h) <= beta min(h), i.e. a <= h <= beta a for some a > 0."""
    return float(h.density.max()) <= level.beta * float(h.density.min()) + NORMALIZATION_TOL


def expectation_under(h: ScenarioDensity, rv: "RandomVariable") -> float:
    """Expectation of `rv` under the measure with density `h`.

    Raises:
        SpaceMismatchError: If `h` and `rv` live on different spaces.
    """
    if h.space != rv.space:
        msg = "Density and random variable live on different probability spaces"
        raise SpaceMismatchError(msg)
    return float((h.density * h.space.atom_probs) @ rv.values)


def _extreme_expectations(rv: "RandomVariable", level: "RiskLevel") -> "Iterator[FloatArray]":
    """Yield E_Q[rv] for every extreme density, one block of proper nonempty subsets at a time.

    Raises:
        TooManyAtomsError: If the space has more atoms than the enumeration allows.
    """
    n_atoms = rv.space.n_atoms
    if n_atoms > MAX_SUBSET_ATOMS:
        msg = f"Subset enumeration supports at most {MAX_SUBSET_ATOMS} atoms, got {n_atoms}"
        raise TooManyAtomsError(msg)

    probs = rv.space.atom_probs
    weighted = probs * rv.values
    total = float(weighted.sum())
    bits = np.arange(n_atoms)
    n_subsets = (1 << n_atoms) - 1
    logger.debug(f"Enumerating {n_subsets - 1} proper subsets of {n_atoms} atoms")

    for start in range(1, n_subsets, SUBSET_BLOCK):
        codes = np.arange(start, min(start + SUBSET_BLOCK, n_subsets))
        members = ((codes[:, None] >> bits) & 1).astype(np.float64)
        prob_a = members @ probs
        inside = members @ weighted
        a = 1.0 / (level.beta + prob_a * (1.0 - level.beta))
        yield a * (inside + level.beta * (total - inside))


def expectile_bruteforce_subsets(rv: "RandomVariable", level: "RiskLevel") -> float:
    """Expectile as the minimum of E_Q[rv] over every extreme density.

    Args:
        rv (RandomVariable): The random variable, on at most `MAX_SUBSET_ATOMS` atoms.
        level (RiskLevel): The risk level.

    Returns:
        float: The smallest expectation over the extreme points of the scenario set.
    """
    if rv.space.n_atoms == 1:
        return float(rv.values[0])
    return min(float(block.min()) for block in _extreme_expectations(rv, level))


def scenario_sup(rv: "RandomVariable", level: "RiskLevel") -> float:
    """Largest expectation of `rv` over the scenario set, attained at an extreme density."""
    if rv.space.n_atoms == 1:
        return float(rv.values[0])
    return max(float(block.max()) for block in _extreme_expectations(rv, level))


def _scan_objective(d: "DiscreteDistribution", level: "RiskLevel") -> tuple["FloatArray", "FloatArray"]:
    """Scan objective (mean + (beta - 1) x u_x) / (1 + (beta - 1) x) at x in {0} and the cumulative probabilities."""
    xs = np.concatenate(([0.0], d.cumulative))
    lower_integrals = np.concatenate(([0.0], np.cumsum(d.outcomes * d.probs)))
    total = lower_integrals[-1]
    excess = level.beta - 1.0
    return xs, (total + excess * lower_integrals) / (1.0 + excess * xs)


def breakpoint_scan_argmin(d: "DiscreteDistribution", level: "RiskLevel") -> tuple[float, float]:
    """Minimise the scan objective over breakpoints.

    Between consecutive cumulative probabilities the objective is a ratio of affine functions of x, hence
    monotone, so the minimum over [0, 1] is attained at a breakpoint.

    Returns:
        tuple[float, float]: The smallest minimising x and the minimum, which is the expectile.
    """
    xs, values = _scan_objective(d, level)
    best = int(np.argmin(values))
    logger.debug(f"Breakpoint scan minimum at x={xs[best]} for tau={level.tau}")
    return float(xs[best]), float(values[best])


def expectile_breakpoint_scan(d: "DiscreteDistribution", level: "RiskLevel") -> float:
    """Expectile as the exact minimum of the quantile scan objective."""
    return breakpoint_scan_argmin(d, level)[1]


def certificate_subset(rv: "RandomVariable", x: float) -> SubsetSpec:
    """Subset A whose extreme density puts its larger value beta a on the lowest mass `x` of `rv`.

    Args:
        rv (RandomVariable): The random variable.
        x (float): A cumulative probability of the law of `rv`, strictly between 0 and 1.

    Returns:
        SubsetSpec: The atoms whose value lies strictly above the lower quantile at `x`.

    Raises:
        EmptyOrFullSubsetError: If `x` is 0 or 1, where the scan minimiser is the constant density.
    """
    if not (0.0 < x < 1.0):
        msg = f"No proper subset corresponds to x={x}"
        raise EmptyOrFullSubsetError(msg)
    threshold = quantile(law_of(rv), x)
    return SubsetSpec(frozenset(int(i) for i in np.flatnonzero(rv.values > threshold)))


def _check_probability(c: float) -> None:
    if not (0.0 <= c <= 1.0):
        msg = f"Event probability must lie in [0, 1], got {c}"
        raise OutOfRangeError(msg)


def expectile_indicator(c: float, level: "RiskLevel") -> float:
    """Closed form c / (beta - (beta - 1) c) of the expectile of an indicator with probability `c`."""
    _check_probability(c)
    return c / (level.beta - (level.beta - 1.0) * c)


def expectile_neg_indicator(c: float, level: "RiskLevel") -> float:
    """Closed form of the expectile of minus an indicator, -beta c / (1 + (beta - 1) c).

    Obtained from -1_C = 1_{C^c} - 1 and cash additivity.
    """
    _check_probability(c)
    return -level.beta * c / (1.0 + (level.beta - 1.0) * c)


def expectile_neg_indicator_as_printed(c: float, level: "RiskLevel") -> float:
    """The variant -beta c / (beta - (beta - 1) c); it breaks cash additivity and only matches at c = 1/2."""
    _check_probability(c)
    return -level.beta * c / (level.beta - (level.beta - 1.0) * c)
