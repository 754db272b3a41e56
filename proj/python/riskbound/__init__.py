"""Lower bounds on exponential moments of the quadratic estimation error."""

from ._riskbound import *  # noqa: F401,F403
from ._riskbound import BoundValue, DivergenceError, ConditioningError, ResolutionError  # noqa: F401
