"""Run the property audit on seeded random fixtures."""

import argparse
import functools
import logging
import math
import sys
import typing as t
from dataclasses import dataclass

import numpy as np

from expectiles import (
    DEFAULT_AUDIT_SEED,
    DEFAULT_AUDIT_TRIALS,
    DEFAULT_TAUS,
    EXIT_AUDIT_FAILURE,
    EXIT_USAGE_ERROR,
    SLACK,
)
from expectiles.dist_core import (
    FiniteProbabilitySpace,
    RandomVariable,
    RiskLevel,
    cdf,
    comonotone_pair,
    ess_inf,
    from_atoms,
    indicator_law,
    is_comonotone,
    law_of,
    mean,
    negate,
    quantile,
    tail_expectation,
)
from expectiles.distortion import (
    Distortion,
    SandwichReport,
    choquet_value,
    comonotone_utility_v,
    cvar_distortion,
    sigma_of_tau,
)
from expectiles.errors import BoundViolatedError, InvalidRiskLevelError
from expectiles.expectile import expectile, expectile_argmin, expectile_via_acceptance, first_order_as_printed, foc
from expectiles.kusuoka import (
    KusuokaMeasure,
    distortion_from_measure,
    in_f_beta,
    kusuoka_argmin,
    mixture_value,
    random_admissible_measure,
)
from expectiles.scenario import (
    SubsetSpec,
    breakpoint_scan_argmin,
    certificate_subset,
    density_lower_bound,
    expectation_under,
    expectile_bruteforce_subsets,
    expectile_indicator,
    expectile_neg_indicator,
    expectile_neg_indicator_as_printed,
    extreme_density,
    is_in_scenario_set,
)
from expectiles.typehints import AuditArgs, AuditResult, parse_taus
from expectiles.wasserstein import centered, d1, d1_by_transport, scenario_lipschitz_bound, tightness_witness

if t.TYPE_CHECKING:
    from collections.abc import Callable, Collection, Sequence

    from expectiles.dist_core import DiscreteDistribution
    from expectiles.expectile import FirstOrder

    Solver = Callable[[DiscreteDistribution, RiskLevel], float]
    Check = Callable[["_Tally", "_Context"], None]


logging.basicConfig(level=logging.INFO, format="%(levelname)s - %(message)s")
logger = logging.getLogger(__name__)

AGREEMENT_TOL: float = 1e-9
TRANSPORT_TOL: float = 1e-7
# Smallest superadditivity gap of the comonotone witness, and smallest gap between v and e on it.
WITNESS_GAP: float = 1e-6
MINORANT_GAP: float = 1e-3
# Witness ratios must reach this fraction of their bound.
WITNESS_FRACTION: float = 0.997
WITNESS_EPS: float = 1e-3
SMALL_TAU: float = 1e-4
DISCRIMINATING_C: float = 0.25

MAX_SUPPORT: int = 20
MAX_SUBSET_SUPPORT: int = 12
MAX_TRANSPORT_SUPPORT: int = 4
OUTCOME_SPREAD: float = 5.0
# Events of probability k / EVENT_GRID; grid laws only charge multiples of 1 / EVENT_GRID.
EVENT_GRID: int = 20
# Tail expectation thresholds tried as minorants, as multiples of 1 / beta.
CVAR_MULTIPLES: tuple[float, ...] = (0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 4.0)


@dataclass(slots=True)
class _Tally:
    """Running count of trials, failures and the smallest slack of one check."""

    name: str
    tolerance: float
    trials: int = 0
    failures: int = 0
    worst_slack: float = math.inf

    def record(self, slack: float) -> None:
        self.trials += 1
        self.worst_slack = min(self.worst_slack, slack)
        if not slack >= -self.tolerance:
            self.failures += 1
            logger.debug(f"{self.name}: trial {self.trials} failed with slack {slack}")

    def result(self) -> AuditResult:
        worst = self.worst_slack if self.trials else 0.0
        return AuditResult(check_name=self.name, trials=self.trials, failures=self.failures, worst_slack=worst)


@dataclass(frozen=True, slots=True)
class _Context:
    """What every check receives: its own generator, the levels, the trial count and the solver under audit."""

    rng: np.random.Generator
    levels: "Sequence[RiskLevel]"
    trials: int
    solve: "Solver"

    def level(self, trial: int) -> RiskLevel:
        return self.levels[trial % len(self.levels)]


def _random_law(rng: np.random.Generator, max_support: int = MAX_SUPPORT) -> "DiscreteDistribution":
    """Law with at most `max_support` atoms, outcomes on a 0.01 grid of [-5, 5] so that ties occur."""
    size = int(rng.integers(1, max_support + 1))
    outcomes = np.round(rng.uniform(-OUTCOME_SPREAD, OUTCOME_SPREAD, size), 2)
    return from_atoms(outcomes, rng.dirichlet(np.ones(size)))


def _random_space(rng: np.random.Generator, max_atoms: int) -> FiniteProbabilitySpace:
    return FiniteProbabilitySpace(rng.dirichlet(np.ones(int(rng.integers(2, max_atoms + 1)))))


def _random_rv(rng: np.random.Generator, space: FiniteProbabilitySpace) -> RandomVariable:
    return RandomVariable(space, np.round(rng.uniform(-OUTCOME_SPREAD, OUTCOME_SPREAD, space.n_atoms), 2))


def _random_grid_law(rng: np.random.Generator) -> "DiscreteDistribution":
    """Law whose probabilities are multiples of 1 / EVENT_GRID, so that every survival probability is on the grid."""
    size = int(rng.integers(1, EVENT_GRID + 1))
    counts = 1 + rng.multinomial(EVENT_GRID - size, np.full(size, 1.0 / size))
    outcomes = np.round(rng.uniform(-OUTCOME_SPREAD, OUTCOME_SPREAD, size), 2)
    return from_atoms(outcomes, counts / EVENT_GRID)


def _event_probabilities() -> list[float]:
    return [k / EVENT_GRID for k in range(1, EVENT_GRID)]


def _check_quantile_galois(tally: _Tally, ctx: _Context) -> None:
    for _ in range(ctx.trials):
        d = _random_law(ctx.rng)
        u = 1.0 - ctx.rng.uniform()
        q = quantile(d, u)
        index = int(np.searchsorted(d.outcomes, q))
        slack = cdf(d, q) - u
        if index > 0:
            slack = min(slack, u - cdf(d, float(d.outcomes[index - 1])))
        tally.record(slack)


def _check_tail_expectation_bounds(tally: _Tally, ctx: _Context) -> None:
    for _ in range(ctx.trials):
        d = _random_law(ctx.rng)
        low, high = np.sort(1.0 - ctx.rng.uniform(size=2))
        u_low, u_high = tail_expectation(d, low), tail_expectation(d, high)
        tally.record(
            min(
                u_low - ess_inf(d),
                u_high - u_low,
                mean(d) - u_high,
                -abs(choquet_value(d, cvar_distortion(low)) - u_low),
            )
        )


def _check_coherence_axioms(tally: _Tally, ctx: _Context) -> None:
    for trial in range(ctx.trials):
        level = ctx.level(trial)
        space = _random_space(ctx.rng, 8)
        x, y = _random_rv(ctx.rng, space), _random_rv(ctx.rng, space)
        noise = RandomVariable(space, np.abs(_random_rv(ctx.rng, space).values))
        factor = float(ctx.rng.uniform(0.0, 3.0))
        cash = float(ctx.rng.uniform(-OUTCOME_SPREAD, OUTCOME_SPREAD))

        def e(rv: RandomVariable, level: RiskLevel = level) -> float:
            return ctx.solve(law_of(rv), level)

        tally.record(
            min(
                e(x + y) - e(x) - e(y),
                e(x + noise) - e(x),
                -abs(e(x.scaled(factor)) - factor * e(x)) / (1.0 + factor),
                -abs(e(x + cash) - e(x) - cash),
            )
        )


def _check_solver_cross_validation(tally: _Tally, ctx: _Context) -> None:
    for trial in range(ctx.trials):
        level = ctx.level(trial)
        d = _random_law(ctx.rng)
        root = ctx.solve(d, level)
        tally.record(
            -max(abs(root - expectile_argmin(d, level)), abs(root - expectile_via_acceptance(d, level)))
        )


def _check_four_way_agreement(tally: _Tally, ctx: _Context) -> None:
    for trial in range(ctx.trials):
        level = ctx.level(trial)
        rv = _random_rv(ctx.rng, _random_space(ctx.rng, MAX_SUBSET_SUPPORT))
        d = law_of(rv)
        values = [
            ctx.solve(d, level),
            expectile_argmin(d, level),
            breakpoint_scan_argmin(d, level)[1],
            expectile_bruteforce_subsets(rv, level),
        ]
        tally.record(min(values) - max(values))


def _event_probability(ctx: _Context, trial: int) -> float:
    """The discriminating probability on the first pass over the levels, random ones afterwards."""
    return DISCRIMINATING_C if trial < len(ctx.levels) else float(ctx.rng.uniform(0.01, 0.99))


def _check_indicator_consistency(tally: _Tally, ctx: _Context) -> None:
    for trial in range(ctx.trials):
        level = ctx.level(trial)
        c = _event_probability(ctx, trial)
        d = indicator_law(c)
        closed_form = expectile_indicator(c, level)
        tally.record(
            -max(abs(ctx.solve(d, level) - closed_form), abs(comonotone_utility_v(d, level) - closed_form))
        )


def _check_neg_indicator(tally: _Tally, ctx: _Context) -> None:
    for trial in range(ctx.trials):
        level = ctx.level(trial)
        c = _event_probability(ctx, trial)
        tally.record(-abs(ctx.solve(negate(indicator_law(c)), level) - expectile_neg_indicator(c, level)))


def _check_tau_monotonicity(tally: _Tally, ctx: _Context) -> None:
    for _ in range(ctx.trials):
        d = _random_law(ctx.rng)
        grid = np.sort(0.5 - ctx.rng.uniform(0.0, 0.5, size=10))
        values = [ctx.solve(d, RiskLevel(float(tau))) for tau in grid]
        tally.record(float(np.diff(values).min()))


def _check_mean_limit(tally: _Tally, ctx: _Context) -> None:
    small = RiskLevel(SMALL_TAU)
    for _ in range(ctx.trials):
        d = _random_law(ctx.rng)
        floor = ess_inf(d)
        excess = ctx.solve(d, small) - floor
        # From the first-order condition: (1 - tau) p_min (e - inf) <= tau (mean - inf).
        bound = SMALL_TAU / (1.0 - SMALL_TAU) * (mean(d) - floor) / float(d.probs[0])
        tally.record(min(-abs(ctx.solve(d, RiskLevel(0.5)) - mean(d)), excess, bound - excess))


def _check_scan_certificate(tally: _Tally, ctx: _Context) -> None:
    for trial in range(ctx.trials):
        level = ctx.level(trial)
        rv = _random_rv(ctx.rng, _random_space(ctx.rng, 10))
        d = law_of(rv)
        x, value = breakpoint_scan_argmin(d, level)
        if not (0.0 < x < 1.0):
            tally.record(-abs(mean(d) - value))
            continue
        h = extreme_density(rv.space, certificate_subset(rv, x), level)
        slack = -abs(expectation_under(h, rv) - value)
        tally.record(slack if is_in_scenario_set(h, level) else -math.inf)


def _check_extreme_density_bounds(tally: _Tally, ctx: _Context) -> None:
    for trial in range(ctx.trials):
        level = ctx.level(trial)
        space = _random_space(ctx.rng, 10)
        size = int(ctx.rng.integers(1, space.n_atoms))
        members = ctx.rng.choice(space.n_atoms, size=size, replace=False)
        h = extreme_density(space, SubsetSpec(frozenset(int(i) for i in members)), level)
        tally.record(
            min(
                float(h.density.min()) - density_lower_bound(level),
                level.beta - float(h.density.max()),
                level.beta * float(h.density.min()) - float(h.density.max()),
            )
        )


def _check_sandwich(tally: _Tally, ctx: _Context) -> None:
    for trial in range(ctx.trials):
        level = ctx.level(trial)
        d = _random_law(ctx.rng)
        report = SandwichReport(
            e_tau=ctx.solve(d, level),
            v=comonotone_utility_v(d, level),
            e_sigma=ctx.solve(d, sigma_of_tau(level)),
            cvar_lb=tail_expectation(d, 1.0 / level.beta),
        )
        tally.record(report.worst_slack())


def _check_comonotone_additivity(tally: _Tally, ctx: _Context) -> None:
    for trial in range(ctx.trials):
        level = ctx.level(trial)
        space = _random_space(ctx.rng, 10)
        g1, g2 = (np.sort(_random_rv(ctx.rng, space).values) for _ in range(2))
        x, y = comonotone_pair(space, g1, g2)

        def v(rv: RandomVariable, level: RiskLevel = level) -> float:
            return comonotone_utility_v(law_of(rv), level)

        slack = -abs(v(x + y) - v(x) - v(y))
        tally.record(slack if is_comonotone(x, y) else -math.inf)


def _check_comonotone_strict_gap(tally: _Tally, ctx: _Context) -> None:
    # Three equally likely atoms: 1_{atoms 1, 2} + 1_{atom 2} has the law of uniform {0, 1, 2}.
    x, y = comonotone_pair(FiniteProbabilitySpace.uniform(3), [0.0, 1.0, 1.0], [0.0, 0.0, 1.0])
    total = law_of(x + y)
    for level in ctx.levels:
        if level.beta == 1.0:
            continue
        e_total = ctx.solve(total, level)
        superadditivity = e_total - ctx.solve(law_of(x), level) - ctx.solve(law_of(y), level)
        minorant_gap = e_total - comonotone_utility_v(total, level)
        tally.record(min(superadditivity - WITNESS_GAP, minorant_gap - MINORANT_GAP))


def _random_measure(rng: np.random.Generator) -> KusuokaMeasure:
    count = int(rng.integers(1, 6))
    alphas = rng.uniform(0.01, 1.0, size=count)
    weights = rng.dirichlet(np.ones(count + 1))
    return KusuokaMeasure.from_pairs([*zip(alphas.tolist(), weights[:-1].tolist(), strict=True), (1.0, weights[-1])])


def _check_kusuoka_fubini(tally: _Tally, ctx: _Context) -> None:
    for _ in range(ctx.trials):
        nu = _random_measure(ctx.rng)
        d = _random_law(ctx.rng)
        tally.record(-abs(mixture_value(d, nu) - choquet_value(d, distortion_from_measure(nu))))


def _check_kusuoka_attainment(tally: _Tally, ctx: _Context) -> None:
    for trial in range(ctx.trials):
        level = ctx.level(trial)
        d = _random_law(ctx.rng)
        nu, value = kusuoka_argmin(d, level)
        slack = -abs(value - ctx.solve(d, level))
        if len(nu.atoms) > 1:
            constraint = float(nu.weights @ (1.0 / nu.alphas))
            slack = min(slack, -abs(constraint - level.beta * nu.mass_at_one))
            if not in_f_beta(distortion_from_measure(nu), level):
                slack = -math.inf
        tally.record(slack)


def _check_kusuoka_upper_bound(tally: _Tally, ctx: _Context) -> None:
    for trial in range(ctx.trials):
        level = ctx.level(trial)
        nu = random_admissible_measure(ctx.rng, level)
        d = _random_law(ctx.rng)
        slack = mixture_value(d, nu) - ctx.solve(d, level)
        tally.record(slack if in_f_beta(distortion_from_measure(nu), level) else -math.inf)


def _check_majorant_strict_gap(tally: _Tally, ctx: _Context) -> None:
    # Every admissible mixture lies strictly above the expectile somewhere, so none of them is the smallest.
    events = [indicator_law(c) for c in _event_probabilities()]
    event_values = {level: [ctx.solve(event, level) for event in events] for level in ctx.levels}
    for trial in range(ctx.trials):
        level = ctx.level(trial)
        if level.beta == 1.0:
            continue
        d = _random_law(ctx.rng)
        e_d = ctx.solve(d, level)
        for nu in (random_admissible_measure(ctx.rng, level), kusuoka_argmin(d, level)[0]):
            gaps = [mixture_value(event, nu) - e for event, e in zip(events, event_values[level], strict=True)]
            tally.record(max(mixture_value(d, nu) - e_d, *gaps) - WITNESS_GAP)


def _check_distortion_dominance(tally: _Tally, ctx: _Context) -> None:
    for trial in range(ctx.trials):
        level = ctx.level(trial)
        other = RiskLevel(float(ctx.rng.uniform(0.01, 0.5)))
        smaller, larger = sorted((level, other), key=lambda lvl: lvl.tau)
        d = _random_law(ctx.rng)
        low, high = np.sort(1.0 - ctx.rng.uniform(size=2))
        tally.record(
            min(
                choquet_value(d, cvar_distortion(float(high))) - choquet_value(d, cvar_distortion(float(low))),
                comonotone_utility_v(d, larger) - comonotone_utility_v(d, smaller),
                mean(d) - comonotone_utility_v(d, level),
            )
        )


def _below_on_events(f: Distortion, level: RiskLevel) -> bool:
    return all(choquet_value(indicator_law(c), f) <= expectile_indicator(c, level) for c in _event_probabilities())


def _check_minorant_maximality(tally: _Tally, ctx: _Context) -> None:
    # A tail expectation or Kusuoka mixture below the expectile on the fixtures stays below the minorant v.
    for trial in range(ctx.trials):
        level = ctx.level(trial)
        d = _random_grid_law(ctx.rng)
        e_d = ctx.solve(d, level)
        candidates = [cvar_distortion(min(1.0, multiple / level.beta)) for multiple in CVAR_MULTIPLES]
        candidates.append(distortion_from_measure(_random_measure(ctx.rng)))
        below = [f for f in candidates if _below_on_events(f, level) and choquet_value(d, f) <= e_d + SLACK]
        if not below:
            tally.record(-math.inf)
            continue
        v = comonotone_utility_v(d, level)
        tally.record(min(v - choquet_value(d, f) for f in below))


def _check_d1_metric(tally: _Tally, ctx: _Context) -> None:
    for _ in range(ctx.trials):
        mu, nu, rho = (_random_law(ctx.rng) for _ in range(3))
        forward = d1(mu, nu)
        tally.record(
            min(-abs(forward - d1(nu, mu)), -d1(mu, mu), forward + d1(nu, rho) - d1(mu, rho))
        )


def _check_d1_transport(tally: _Tally, ctx: _Context) -> None:
    for _ in range(ctx.trials):
        mu, nu = (_random_law(ctx.rng, MAX_TRANSPORT_SUPPORT) for _ in range(2))
        tally.record(-abs(d1(mu, nu) - d1_by_transport(mu, nu)))


def _check_lipschitz_beta(tally: _Tally, ctx: _Context) -> None:
    for trial in range(ctx.trials):
        level = ctx.level(trial)
        mu, nu = _random_law(ctx.rng), _random_law(ctx.rng)
        slack = level.beta * d1(mu, nu) - abs(ctx.solve(mu, level) - ctx.solve(nu, level))

        space = _random_space(ctx.rng, 6)
        x, y = _random_rv(ctx.rng, space), _random_rv(ctx.rng, space)
        dual = scenario_lipschitz_bound(x, y, level)
        gap = abs(ctx.solve(law_of(x), level) - ctx.solve(law_of(y), level))
        l1 = float(space.atom_probs @ np.abs(x.values - y.values))
        tally.record(min(slack, dual - gap, level.beta * l1 - dual))


def _check_lipschitz_centered(tally: _Tally, ctx: _Context) -> None:
    for trial in range(ctx.trials):
        level = ctx.level(trial)
        mu, nu = centered(_random_law(ctx.rng)), centered(_random_law(ctx.rng))
        bound = (level.beta - 1.0) / 2.0
        tally.record(bound * d1(mu, nu) - abs(ctx.solve(mu, level) - ctx.solve(nu, level)))


def _check_lipschitz_witness(tally: _Tally, ctx: _Context) -> None:
    for level in ctx.levels:
        try:
            audits = tightness_witness(level, WITNESS_EPS / level.beta)
        except BoundViolatedError as e:
            logger.error(f"Witness at tau={level.tau} violated its bound: {e}")
            tally.record(-math.inf)
            continue
        tally.record(min(audit.ratio - WITNESS_FRACTION * audit.bound for audit in audits))


CHECKS: list[tuple[str, float, "Check"]] = [
    ("quantile_galois", 0.0, _check_quantile_galois),
    ("tail_expectation_bounds", SLACK, _check_tail_expectation_bounds),
    ("coherence_axioms", AGREEMENT_TOL, _check_coherence_axioms),
    ("solver_cross_validation", AGREEMENT_TOL, _check_solver_cross_validation),
    ("four_way_agreement", AGREEMENT_TOL, _check_four_way_agreement),
    ("indicator_consistency", SLACK, _check_indicator_consistency),
    ("neg_indicator", SLACK, _check_neg_indicator),
    ("tau_monotonicity", AGREEMENT_TOL, _check_tau_monotonicity),
    ("mean_limit", SLACK, _check_mean_limit),
    ("scan_certificate", SLACK, _check_scan_certificate),
    ("extreme_density_bounds", SLACK, _check_extreme_density_bounds),
    ("sandwich", SLACK, _check_sandwich),
    ("comonotone_additivity", SLACK, _check_comonotone_additivity),
    ("comonotone_strict_gap", 0.0, _check_comonotone_strict_gap),
    ("kusuoka_fubini", SLACK, _check_kusuoka_fubini),
    ("kusuoka_attainment", AGREEMENT_TOL, _check_kusuoka_attainment),
    ("kusuoka_upper_bound", SLACK, _check_kusuoka_upper_bound),
    ("majorant_strict_gap", 0.0, _check_majorant_strict_gap),
    ("distortion_dominance", SLACK, _check_distortion_dominance),
    ("minorant_maximality", SLACK, _check_minorant_maximality),
    ("d1_metric", SLACK, _check_d1_metric),
    ("d1_transport", TRANSPORT_TOL, _check_d1_transport),
    ("lipschitz_beta", AGREEMENT_TOL, _check_lipschitz_beta),
    ("lipschitz_centered", AGREEMENT_TOL, _check_lipschitz_centered),
    ("lipschitz_witness", 0.0, _check_lipschitz_witness),
]


def run_audit(
    seed: int,
    trials: int,
    taus: "Sequence[float]",
    *,
    first_order: "FirstOrder" = foc,
    only: "Collection[str] | None" = None,
) -> list[AuditResult]:
    """Run every check on fixtures drawn from `numpy.random.default_rng([seed, check_index])`.

    Args:
        seed (int): Seed of the random fixtures.
        trials (int): Random instances per check.
        taus (Sequence[float]): Risk levels the checks cycle through.
        first_order (FirstOrder): First-order function handed to the bisection solver under audit.
        only (Collection[str] | None): Names of the checks to run; all of them when None.

    Returns:
        list[AuditResult]: One result per check run, in a fixed order.
    """
    levels = [RiskLevel(tau) for tau in taus]
    solve = functools.partial(expectile, first_order=first_order)
    results = []
    for index, (name, tolerance, check) in enumerate(CHECKS):
        if only is not None and name not in only:
            continue
        tally = _Tally(name, tolerance)
        check(tally, _Context(np.random.default_rng([seed, index]), levels, trials, solve))
        results.append(tally.result())
        logger.debug(f"{name}: {tally.trials} trials, {tally.failures} failures")
    return results


def discrepancy_lines(taus: "Sequence[float]") -> list[str]:
    """Metadata lines comparing the closed forms with their variants of swapped orientation."""
    uniform_three = from_atoms([0.0, 1.0, 2.0], [1 / 3, 1 / 3, 1 / 3])
    lines = []
    for tau in taus:
        level = RiskLevel(tau)
        lines.append(
            f"# neg_indicator tau={tau!r} c={DISCRIMINATING_C!r}"
            f" proof_consistent={expectile_neg_indicator(DISCRIMINATING_C, level)!r}"
            f" as_printed={expectile_neg_indicator_as_printed(DISCRIMINATING_C, level)!r}"
        )
        lines.append(
            f"# first_order tau={tau!r} law=uniform{{0,1,2}}"
            f" proof_consistent={expectile(uniform_three, level)!r}"
            f" as_printed={expectile(uniform_three, level, first_order=first_order_as_printed)!r}"
        )
    return lines


def register(parser: argparse.ArgumentParser) -> None:
    """Register the command-line parser for the audit.

    Args:
        parser: The argument parser to register the command with.
    """
    parser.add_argument(
        "--seed",
        type=int,
        default=DEFAULT_AUDIT_SEED,
        help=f"Seed of the random fixtures. Default: {DEFAULT_AUDIT_SEED}",
    )
    parser.add_argument(
        "--trials",
        type=int,
        default=DEFAULT_AUDIT_TRIALS,
        help=f"Random instances per check, at least 1. Default: {DEFAULT_AUDIT_TRIALS}",
    )
    parser.add_argument(
        "--tau",
        dest="taus",
        type=parse_taus,
        default=list(DEFAULT_TAUS),
        help=f"Comma-separated risk levels in (0, 0.5]. Default: {','.join(map(str, DEFAULT_TAUS))}",
    )

    parser.set_defaults(func=main)


def validate_args(arguments: argparse.Namespace) -> AuditArgs | None:
    """Validate the arguments.

    Args:
        arguments: The parsed command-line arguments.

    Returns:
        AuditArgs | None: Validated arguments or None if validation fails.
    """
    args = AuditArgs(seed=arguments.seed, trials=arguments.trials, taus=arguments.taus)

    ret_args: AuditArgs | None = args

    if args.trials < 1:
        logger.error(f"Trials must be at least 1, got {args.trials}.")
        ret_args = None
    for tau in args.taus:
        try:
            RiskLevel(tau)
        except InvalidRiskLevelError as e:
            logger.error(str(e))
            ret_args = None

    return ret_args


def main(arguments: argparse.Namespace) -> None:
    """Run every property check and print one line per check.

    Args:
        arguments: The parsed command-line arguments.
    """
    args = validate_args(arguments)

    if args is None:
        sys.exit(EXIT_USAGE_ERROR)

    results = run_audit(args.seed, args.trials, args.taus)
    lines = [*discrepancy_lines(args.taus), *(result.format_line() for result in results)]
    sys.stdout.write("\n".join(lines) + "\n")

    failed = [result.check_name for result in results if not result.passed]
    if failed:
        logger.error(f"{len(failed)} check(s) failed: {', '.join(failed)}")
        sys.exit(EXIT_AUDIT_FAILURE)
    logger.info(f"All {len(results)} checks passed.")
