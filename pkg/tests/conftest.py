"""Shared fixtures."""

import typing as t

import pytest

from expectiles.dist_core import DiscreteDistribution, RiskLevel, from_atoms, indicator_law

if t.TYPE_CHECKING:
    from collections.abc import Callable


@pytest.fixture
def u3() -> DiscreteDistribution:
    """Uniform law on {0, 1, 2}."""
    return from_atoms([0.0, 1.0, 2.0], [1 / 3, 1 / 3, 1 / 3])


@pytest.fixture
def bernoulli() -> "Callable[[float], DiscreteDistribution]":
    """Factory of Bernoulli laws on {0, 1}."""
    return indicator_law


@pytest.fixture
def coin() -> DiscreteDistribution:
    """Bernoulli(0.5)."""
    return indicator_law(0.5)


@pytest.fixture
def level_02() -> RiskLevel:
    """tau = 0.2, beta = 4."""
    return RiskLevel(0.2)


@pytest.fixture
def level_half() -> RiskLevel:
    """tau = 0.5, beta = 1."""
    return RiskLevel(0.5)
