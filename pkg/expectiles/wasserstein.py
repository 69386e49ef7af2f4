"""Wasserstein distance d1 between real laws and Lipschitz certification of the expectile."""

import logging
import typing as t
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from expectiles import EQUAL_MEANS_TOL
from expectiles.dist_core import RandomVariable, indicator_law, mean, negate, point_mass, quantile_steps, shift
from expectiles.errors import BoundViolatedError, OutOfRangeError, SpaceMismatchError, TransportSolverError
from expectiles.expectile import expectile
from expectiles.scenario import scenario_sup

if t.TYPE_CHECKING:
    from expectiles.dist_core import DiscreteDistribution, RiskLevel
    from expectiles.expectile import SolverConfig
    from expectiles.typehints import FloatArray


logger = logging.getLogger(__name__)

# Slack on |e(mu) - e(nu)| <= bound * d1, in outcome units.
LIPSCHITZ_SLACK: float = 1e-9


def _step_values(breakpoints: "FloatArray", values: "FloatArray", right_ends: "FloatArray") -> "FloatArray":
    """Value of a step quantile function on the intervals ending at `right_ends`."""
    index = np.minimum(np.searchsorted(breakpoints[1:], right_ends, side="left"), values.size - 1)
    return values[index]


def d1(mu: "DiscreteDistribution", nu: "DiscreteDistribution") -> float:
    """Wasserstein-1 distance, the L1 distance between the quantile functions.

    Integrates exactly over the merged breakpoints of both quantile functions.
    """
    mu_steps, nu_steps = quantile_steps(mu), quantile_steps(nu)
    grid = np.union1d(mu_steps[0], nu_steps[0])
    right_ends = grid[1:]
    gaps = np.abs(_step_values(*mu_steps, right_ends) - _step_values(*nu_steps, right_ends))
    return float(np.diff(grid) @ gaps)


def d1_by_transport(mu: "DiscreteDistribution", nu: "DiscreteDistribution") -> float:
    """Wasserstein-1 distance as the optimal value of the transport linear program.

    Only meant for small supports; validates that the quantile coupling is optimal.

    Raises:
        TransportSolverError: If the solver does not report an optimal solution.
    """
    cost = np.abs(mu.outcomes[:, None] - nu.outcomes[None, :])
    n, m = cost.shape
    row_sums = np.kron(np.eye(n), np.ones(m))
    column_sums = np.kron(np.ones(n), np.eye(m))
    result = linprog(
        cost.ravel(),
        A_eq=np.vstack((row_sums, column_sums)),
        b_eq=np.concatenate((mu.probs, nu.probs)),
        bounds=(0.0, None),
        method="highs",
    )
    if result.status != 0:
        msg = f"Transport program failed: {result.message}"
        raise TransportSolverError(msg)
    return float(result.fun)


def centered(d: "DiscreteDistribution") -> "DiscreteDistribution":
    """Shift `d` to mean zero."""
    return shift(d, -mean(d))


@dataclass(frozen=True, slots=True)
class LipschitzAudit:
    """Comparison of an expectile difference with the distance between two laws.

    Attributes:
        d1 (float): Wasserstein-1 distance between the laws.
        delta_e (float): Difference of the expectiles.
        ratio (float): |delta_e| / d1, or 0 when the laws coincide.
        bound (float): The Lipschitz constant asserted, beta or (beta - 1) / 2.
        equal_means (bool): Whether the laws were treated as having equal means.
    """

    d1: float
    delta_e: float
    ratio: float
    bound: float
    equal_means: bool

    @property
    def slack(self) -> float:
        """Margin bound * d1 - |delta_e|, negative when the bound is violated."""
        return self.bound * self.d1 - abs(self.delta_e)


def lipschitz_audit(
    mu: "DiscreteDistribution",
    nu: "DiscreteDistribution",
    level: "RiskLevel",
    cfg: "SolverConfig | None" = None,
    *,
    force_beta: bool = False,
) -> LipschitzAudit:
    """Check |e(mu) - e(nu)| <= bound * d1(mu, nu).

    The bound is (beta - 1) / 2 when the means agree within `EQUAL_MEANS_TOL` and beta otherwise, or beta
    whenever `force_beta` is set.

    Raises:
        BoundViolatedError: If the inequality fails beyond `LIPSCHITZ_SLACK`; this signals a bug, not bad data.
    """
    distance = d1(mu, nu)
    delta = expectile(mu, level, cfg) - expectile(nu, level, cfg)
    equal_means = not force_beta and abs(mean(mu) - mean(nu)) <= EQUAL_MEANS_TOL
    bound = (level.beta - 1.0) / 2.0 if equal_means else level.beta
    audit = LipschitzAudit(
        d1=distance,
        delta_e=delta,
        ratio=abs(delta) / distance if distance > 0.0 else 0.0,
        bound=bound,
        equal_means=equal_means,
    )
    if audit.slack < -LIPSCHITZ_SLACK:
        msg = f"Lipschitz bound violated at tau={level.tau}: {audit}"
        raise BoundViolatedError(msg)
    return audit


def tightness_witness(level: "RiskLevel", eps: float) -> tuple[LipschitzAudit, LipschitzAudit]:
    """Pairs of laws whose Lipschitz ratios approach beta and (beta - 1) / 2 as `eps` goes to zero.

    The first pair compares -1_C with P[C] = eps against 0. The second compares the centered indicator
    1_C - c with c = 1 - eps against 0, both of mean zero.

    Raises:
        OutOfRangeError: If `eps` is outside (0, 1).
    """
    if not (0.0 < eps < 1.0):
        msg = f"eps must lie in (0, 1), got {eps}"
        raise OutOfRangeError(msg)
    zero = point_mass(0.0)
    negative_indicator = negate(indicator_law(eps))
    centered_indicator = centered(indicator_law(1.0 - eps))
    return lipschitz_audit(negative_indicator, zero, level), lipschitz_audit(centered_indicator, zero, level)


def scenario_lipschitz_bound(x: "RandomVariable", y: "RandomVariable", level: "RiskLevel") -> float:
    """Largest expectation of |x - y| over the scenario set.

    It bounds |e(x) - e(y)| from above and is itself at most beta E|x - y|.

    Raises:
        SpaceMismatchError: If the variables live on different spaces.
    """
    if x.space != y.space:
        msg = "Random variables live on different probability spaces"
        raise SpaceMismatchError(msg)
    return scenario_sup(RandomVariable(x.space, np.abs(x.values - y.values)), level)
