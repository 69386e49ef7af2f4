"""Tests for Kusuoka mixtures of tail expectations."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from strategies import laws, levels

from expectiles import kusuoka as kusuoka_module
from expectiles.dist_core import DiscreteDistribution, RiskLevel, indicator_law, mean, point_mass, tail_expectation
from expectiles.distortion import choquet_value, f_tau, identity_distortion
from expectiles.errors import InvalidMeasureError, OutOfRangeError
from expectiles.expectile import expectile
from expectiles.kusuoka import (
    KusuokaMeasure,
    distortion_from_measure,
    expectile_via_kusuoka,
    in_f_beta,
    is_admissible,
    kusuoka_argmin,
    mixture_value,
    random_admissible_measure,
    scan_points,
    two_point_measure,
)
from expectiles.scenario import breakpoint_scan_argmin

DIRAC_ONE = KusuokaMeasure.from_pairs([(1.0, 1.0)])
HALF_THIRD = KusuokaMeasure.from_pairs([(1 / 3, 0.5), (1.0, 0.5)])


def test_from_pairs_merges_and_sorts() -> None:
    nu = KusuokaMeasure.from_pairs([(1.0, 0.25), (0.5, 0.5), (0.5, 0.25)])
    np.testing.assert_allclose(nu.alphas, [0.5, 1.0])
    np.testing.assert_allclose(nu.weights, [0.75, 0.25])
    assert nu.mass_at_one == pytest.approx(0.25)


def test_from_pairs_keeps_empty_mass_at_one() -> None:
    nu = KusuokaMeasure.from_pairs([(0.5, 1.0)])
    assert nu.mass_at_one == 0.0
    assert nu.atoms == [(0.5, 1.0)]


@pytest.mark.parametrize(
    "pairs",
    [
        [(0.0, 1.0)],
        [(1.5, 1.0)],
        [(0.5, -0.1), (1.0, 1.1)],
        [(0.5, 0.5), (1.0, 0.6)],
    ],
)
def test_from_pairs_rejects_invalid_measures(pairs: list[tuple[float, float]]) -> None:
    with pytest.raises(InvalidMeasureError):
        KusuokaMeasure.from_pairs(pairs)


def test_admissibility() -> None:
    level = RiskLevel(0.2)
    assert is_admissible(DIRAC_ONE, level)
    assert is_admissible(HALF_THIRD, level)
    assert float(HALF_THIRD.weights @ (1.0 / HALF_THIRD.alphas)) == pytest.approx(level.beta * HALF_THIRD.mass_at_one)
    assert not is_admissible(KusuokaMeasure.from_pairs([(0.5, 1.0)]), level)


def test_mixture_value(u3: DiscreteDistribution) -> None:
    assert mixture_value(u3, DIRAC_ONE) == pytest.approx(mean(u3))
    assert mixture_value(u3, KusuokaMeasure.from_pairs([(2 / 3, 1.0)])) == pytest.approx(tail_expectation(u3, 2 / 3))
    assert mixture_value(u3, HALF_THIRD) == pytest.approx(0.5)


def test_distortion_from_measure() -> None:
    identity = distortion_from_measure(DIRAC_ONE)
    grid = np.linspace(0.0, 1.0, 11)
    np.testing.assert_allclose(identity.evaluate(grid), identity_distortion().evaluate(grid))

    f = distortion_from_measure(HALF_THIRD)
    assert f(2 / 3) == pytest.approx(1 / 3)
    assert f(0.5) == pytest.approx(0.25)
    assert f(0.9) == pytest.approx(0.8)
    right_at_zero, left_at_one = f.derivative_bounds()
    assert right_at_zero == pytest.approx(0.5, abs=1e-6)
    assert left_at_one == pytest.approx(2.0, abs=1e-6)


def test_two_point_measure() -> None:
    level = RiskLevel(0.2)
    nu = two_point_measure(1 / 3, level)
    np.testing.assert_allclose(nu.weights, [0.5, 0.5])
    assert two_point_measure(1.0 - 1e-9, level).weights[0] == pytest.approx(0.75, abs=1e-8)
    assert two_point_measure(0.5, RiskLevel(1 / 3)).weights[0] == pytest.approx(1 / 3)
    assert two_point_measure(0.5, RiskLevel(0.5)).atoms == [(1.0, 1.0)]
    with pytest.raises(OutOfRangeError):
        two_point_measure(1.0, level)


def test_expectile_via_kusuoka_examples(u3: DiscreteDistribution, coin: DiscreteDistribution) -> None:
    level = RiskLevel(0.2)
    assert expectile_via_kusuoka(u3, level) == pytest.approx(0.5)
    assert expectile_via_kusuoka(point_mass(-1.5), level) == -1.5
    nu, value = kusuoka_argmin(coin, level)
    assert value == pytest.approx(0.2)
    np.testing.assert_allclose(nu.alphas, [0.5, 1.0])
    np.testing.assert_allclose(nu.weights, [0.6, 0.4])


def test_scan_points(u3: DiscreteDistribution) -> None:
    assert scan_points(u3) == pytest.approx([1 / 3, 2 / 3, 1.0])
    assert scan_points(point_mass(2.0)) == [1.0]


def test_f_beta_membership() -> None:
    level = RiskLevel(0.2)
    assert in_f_beta(identity_distortion(), level)
    assert not in_f_beta(f_tau(level), level)
    assert in_f_beta(distortion_from_measure(two_point_measure(1 / 3, level)), level)


@given(laws(), levels)
@settings(max_examples=200)
def test_kusuoka_attains_the_expectile(d: DiscreteDistribution, level: RiskLevel) -> None:
    nu, value = kusuoka_argmin(d, level)
    assert value == pytest.approx(expectile(d, level), abs=1e-9)
    assert is_admissible(nu, level)
    if len(nu.atoms) > 1:
        assert float(nu.weights @ (1.0 / nu.alphas)) == pytest.approx(level.beta * nu.mass_at_one, abs=1e-9)


@given(laws(), levels)
def test_two_point_mixture_is_the_scan_objective(d: DiscreteDistribution, level: RiskLevel) -> None:
    excess = level.beta - 1.0
    for alpha in scan_points(d)[:-1]:
        scan = (mean(d) + excess * alpha * tail_expectation(d, alpha)) / (1.0 + excess * alpha)
        assert mixture_value(d, two_point_measure(alpha, level)) == pytest.approx(scan, abs=1e-12)
    assert breakpoint_scan_argmin(d, level)[1] == pytest.approx(expectile_via_kusuoka(d, level), abs=1e-10)


@given(laws(), levels, st.integers(min_value=0, max_value=2**32 - 1))
def test_admissible_measures_bound_the_expectile(d: DiscreteDistribution, level: RiskLevel, seed: int) -> None:
    nu = random_admissible_measure(np.random.default_rng(seed), level)
    assert is_admissible(nu, level)
    f = distortion_from_measure(nu)
    assert in_f_beta(f, level)
    assert mixture_value(d, nu) == pytest.approx(choquet_value(d, f), abs=1e-10)
    assert mixture_value(d, nu) >= expectile(d, level) - 1e-10


def test_random_admissible_distortions_dominate_the_expectile(u3: DiscreteDistribution) -> None:
    level = RiskLevel(0.2)
    rng = np.random.default_rng(7)
    for _ in range(50):
        f = distortion_from_measure(random_admissible_measure(rng, level))
        gaps = [choquet_value(d, f) - expectile(d, level) for d in (u3, point_mass(0.0))]
        assert min(gaps) >= -1e-10


def test_ties_go_to_the_smallest_threshold(u3: DiscreteDistribution, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setattr(kusuoka_module, "mixture_value", lambda d, _: mean(d))
    nu, value = kusuoka_argmin(u3, RiskLevel(0.2))
    assert nu.alphas[0] == pytest.approx(1 / 3)
    assert value == mean(u3)


def test_every_admissible_distortion_has_a_strict_gap(u3: DiscreteDistribution) -> None:
    level = RiskLevel(0.2)
    rng = np.random.default_rng(11)
    events = [indicator_law(k / 20) for k in range(1, 20)]
    measures = [random_admissible_measure(rng, level) for _ in range(50)]
    measures += [kusuoka_argmin(d, level)[0] for d in (u3, *events)]
    for nu in measures:
        gaps = [mixture_value(d, nu) - expectile(d, level) for d in (u3, *events)]
        assert min(gaps) >= -1e-10
        assert max(gaps) > 1e-6
