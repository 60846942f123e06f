"""Wealth lower bound and time-uniform deviation radii.

Notation: ``sum_g`` is sum_i g_i and ``sum_g2`` is sum_i g_i**2; nothing in
this module uses a single name for both.
"""
from dataclasses import dataclass
import enum
import math

import numpy as np

from .special_functions import psi, psi_inv


class BoundForm(enum.Enum):
    EXACT = "exact"  # S * psi_inv(log(A/delta) / (alpha S))
    LOG = "log"  # closed-form upper bound on psi_inv
    SIMPLE = "simple"  # (2/alpha) log(A/delta) + sqrt(2 S log(A/delta) / alpha)


@dataclass(frozen=True)
class BoundParams:
    alpha: float = 0.5
    gamma: float = math.e
    delta: float = 0.05

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        if not self.gamma > 1:
            raise ValueError(f"gamma must be > 1, got {self.gamma}")
        if not 0 < self.delta < 1:
            raise ValueError(f"delta must be in (0, 1), got {self.delta}")

    @property
    def log_gamma(self):
        return math.log(self.gamma)

    @property
    def log_inv_alpha(self):
        return -math.log(self.alpha)


def _scalar(x, like):
    return float(x) if np.ndim(like) == 0 else x


def wealth_lower_bound(sum_g, sum_g2, p=BoundParams()):
    """Guaranteed wealth of the mixture bettor given (sum_g, sum_g2).

    Returns 0 where sum_g == 0, the limit of the expression there.
    """
    S = np.asarray(sum_g, dtype=float)
    V = np.asarray(sum_g2, dtype=float)
    S, V = np.broadcast_arrays(S, V)
    if np.any((V <= 0) & (S != 0)):
        raise ValueError("sum_g2 must be positive when sum_g != 0")
    a = np.abs(S)
    nz = a > 0
    out = np.zeros(S.shape)
    an, vn = a[nz], V[nz]
    lg, li = p.log_gamma, p.log_inv_alpha
    with np.errstate(over="ignore"):
        # |sum_g| -> 0 sends the penalty to +inf and the bound to its limit 0
        penalty = np.log((lg + li + np.log1p(vn / an)) ** 2 / (0.5 * lg * li))
    out[nz] = np.exp(p.alpha * psi(an / vn) * vn - penalty)
    return _scalar(out, sum_g)


def a_t(sum_g2, p=BoundParams()):
    """Logarithmic factor A_t in the deviation radius."""
    V = np.asarray(sum_g2, dtype=float)
    if np.any(V < 0):
        raise ValueError("sum_g2 must be >= 0")
    lg, li = p.log_gamma, p.log_inv_alpha
    out = (lg + li + np.log1p(np.sqrt(0.5 * p.alpha * V))) ** 2 / (0.5 * lg * li)
    return _scalar(out, sum_g2)


def confidence_radius(sum_g2, p=BoundParams(), form=BoundForm.EXACT):
    """Radius R(sum_g2) with P(exists t: |sum_g| > R) <= delta.

    At sum_g2 = 0 the first branch of EXACT and LOG takes its limit
    log(A_t/delta)/alpha.
    """
    form = BoundForm(form)
    V = np.asarray(sum_g2, dtype=float)
    ell = np.log(a_t(V, p) / p.delta)
    alpha = p.alpha
    if form is BoundForm.SIMPLE:
        out = 2.0 * ell / alpha + np.sqrt(2.0 * V * ell / alpha)
        return _scalar(out, sum_g2)

    V1 = np.atleast_1d(V)
    ell1 = np.atleast_1d(ell)
    first = ell1 / alpha
    with np.errstate(divide="ignore", over="ignore"):
        y = ell1 / (alpha * V1)
    # where y overflows the correction V * log(...) is below 1e-300
    ok = (V1 > 0) & np.isfinite(y)
    y = y[ok]
    if form is BoundForm.EXACT:
        # V * psi_inv(y) rewritten through psi_inv(y) = y + log1p(psi_inv(y))
        first[ok] += V1[ok] * np.log1p(psi_inv(y))
    else:
        first[ok] += V1[ok] * np.log1p(y + np.sqrt(2.0 * y))
    out = np.maximum(first, np.sqrt(2.0 * V1 / alpha)).reshape(V.shape)
    return _scalar(out, sum_g2)


# Inequalities used along the way from the betting wealth to the bound.

def log_factor_minorant(beta, x):
    """beta x + x^2 (log(1 - |beta|) + |beta|), a lower bound on log(1 + beta x)."""
    beta = np.asarray(beta, dtype=float)
    x = np.asarray(x, dtype=float)
    b = np.abs(beta)
    return beta * x + x * x * (np.log1p(-b) + b)


def scaled_potential(x, beta):
    """(log(1 - x|beta|) + x|beta|) / x, nonincreasing in x on (0, 1]."""
    x = np.asarray(x, dtype=float)
    b = np.abs(np.asarray(beta, dtype=float))
    return (np.log1p(-x * b) + x * b) / x


def surrogate_objective(beta, sum_g, sum_g2):
    """beta * sum_g + (log(1 - |beta|) + |beta|) * sum_g2; concave in beta."""
    beta = np.asarray(beta, dtype=float)
    b = np.abs(beta)
    return beta * sum_g + (np.log1p(-b) + b) * sum_g2


def surrogate_maximizer(sum_g, sum_g2):
    """sum_g / (|sum_g| + sum_g2), with 0 for an all-zero history."""
    if sum_g == 0:
        return 0.0
    return sum_g / (abs(sum_g) + sum_g2)
