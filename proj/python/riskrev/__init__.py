"""Risk of constrained least squares over convex polytopes."""

from ._riskrev import *  # noqa: F401,F403
from ._riskrev import DEFAULT_SEED, NumericalFailure  # noqa: F401

__version__ = "0.1.0"
