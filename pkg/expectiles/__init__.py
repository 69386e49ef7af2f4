"""Expectile risk measures on finite distributions."""

# Accepted drift of user-supplied probabilities before renormalisation.
INPUT_NORMALIZATION_TOL: float = 1e-9
# Drift tolerated on internally constructed laws and densities.
NORMALIZATION_TOL: float = 1e-12

# Solver defaults: abs_tol = DEFAULT_REL_TOL * max(1, |ess_inf|, |ess_sup|).
DEFAULT_REL_TOL: float = 1e-12
DEFAULT_MAX_ITER: int = 200

SLACK: float = 1e-10  # Slack allowed on inequalities between risk values.
EQUAL_MEANS_TOL: float = 1e-9
MAX_SUBSET_ATOMS: int = 22

CONVEXITY_GRID: int = 1001
CONVEXITY_TOL: float = 1e-10
DERIVATIVE_STEP: float = 1e-7
DERIVATIVE_TOL: float = 1e-6
# Distinct levels whose minorant distortion is kept.
F_TAU_CACHE_SIZE: int = 64

CSV_SIGNIFICANT_DIGITS: int = 17

EXIT_OK: int = 0
EXIT_AUDIT_FAILURE: int = 1
EXIT_PARSE_ERROR: int = 2
EXIT_USAGE_ERROR: int = 3

DEFAULT_AUDIT_SEED: int = 42
DEFAULT_AUDIT_TRIALS: int = 200
DEFAULT_TAUS: tuple[float, ...] = (0.05, 0.2, 0.4)
