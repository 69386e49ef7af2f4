"""Hypothesis strategies for finite laws, random variables and risk levels."""

import hypothesis.strategies as st
import numpy as np

from expectiles.dist_core import DiscreteDistribution, FiniteProbabilitySpace, RandomVariable, RiskLevel, from_atoms

# Outcomes live on a 0.01 grid of [-5, 5] so that ties and repeated values occur.
outcomes = st.integers(min_value=-500, max_value=500).map(lambda n: n / 100)
weights = st.floats(min_value=0.01, max_value=1.0, allow_nan=False, allow_infinity=False)

levels = st.floats(min_value=1e-3, max_value=0.5, allow_nan=False).map(RiskLevel)


@st.composite
def laws(draw: st.DrawFn, max_size: int = 12) -> DiscreteDistribution:
    """A law with at most `max_size` atoms before merging."""
    size = draw(st.integers(min_value=1, max_value=max_size))
    values = draw(st.lists(outcomes, min_size=size, max_size=size))
    raw = np.array(draw(st.lists(weights, min_size=size, max_size=size)))
    return from_atoms(values, raw / raw.sum())


@st.composite
def spaces(draw: st.DrawFn, max_atoms: int = 8) -> FiniteProbabilitySpace:
    """A space with between two and `max_atoms` atoms."""
    size = draw(st.integers(min_value=2, max_value=max_atoms))
    raw = np.array(draw(st.lists(weights, min_size=size, max_size=size)))
    return FiniteProbabilitySpace(raw / raw.sum())


def random_variables(space: FiniteProbabilitySpace) -> st.SearchStrategy[RandomVariable]:
    """Random variables on `space`."""
    return st.lists(outcomes, min_size=space.n_atoms, max_size=space.n_atoms).map(
        lambda values: RandomVariable(space, np.array(values))
    )


@st.composite
def rv_pairs(draw: st.DrawFn, max_atoms: int = 8) -> tuple[RandomVariable, RandomVariable]:
    """Two random variables on a common space."""
    space = draw(spaces(max_atoms))
    return draw(random_variables(space)), draw(random_variables(space))
