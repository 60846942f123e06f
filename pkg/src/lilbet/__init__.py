"""Time-uniform confidence bounds from the wealth of a mixture coin-betting strategy."""
__version__ = "0.1.0"

from .bounds import BoundForm, BoundParams, a_t, confidence_radius, wealth_lower_bound
from .betting_engine import BettingState, QuadratureGrid, init, make_grid, mixture_path
from .prior import PriorParams
