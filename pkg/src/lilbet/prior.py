"""The heavy-tailed betting prior on [-1, 1].

    P(beta) = (log gamma / 2) / (|beta| * log(|beta| / gamma)**2),   gamma > 1

Each half carries mass 1/2. The positive-half CDF has the closed form
``F(b) = 0.5 log(gamma) / (log(gamma) - log(b))``, so in the quantile
coordinate ``m = F(b)`` the prior is uniform on (0, 0.5] and the singularity
at beta = 0 disappears.
"""
from dataclasses import dataclass
import math

import numpy as np


@dataclass(frozen=True)
class PriorParams:
    gamma: float = math.e

    def __post_init__(self):
        if not self.gamma > 1:
            raise ValueError(f"gamma must be > 1, got {self.gamma}")

    @property
    def log_gamma(self):
        return math.log(self.gamma)


def density(beta, p=PriorParams()):
    beta = np.asarray(beta, dtype=float)
    a = np.abs(beta)
    if np.any(a == 0) or np.any(a > 1):
        raise ValueError("density is defined for 0 < |beta| <= 1")
    lg = p.log_gamma
    out = 0.5 * lg / (a * (np.log(a) - lg) ** 2)
    return float(out) if beta.ndim == 0 else out


def positive_cdf(b, p=PriorParams()):
    """Mass of (0, b] for 0 <= b <= 1."""
    b = np.asarray(b, dtype=float)
    lg = p.log_gamma
    with np.errstate(divide="ignore"):
        out = 0.5 * lg / (lg - np.log(b))
    return float(out) if b.ndim == 0 else out


def interval_mass(a, b, p=PriorParams()):
    """Prior mass of [a, b] with 0 <= a <= b <= 1.

    ``a = 0`` is read as the limit a -> 0+.
    """
    if a < 0 or b > 1 or a > b:
        raise ValueError(f"need 0 <= a <= b <= 1, got a={a}, b={b}")
    if a == 0:
        return float(positive_cdf(b, p))
    lg = p.log_gamma
    # product form keeps precision when a is close to b
    return 0.5 * lg * math.log(b / a) / ((lg - math.log(b)) * (lg - math.log(a)))


def quantile(m, p=PriorParams()):
    """Inverse of `positive_cdf`: gamma ** (1 - 1 / (2 m)) for m in (0, 0.5]."""
    m = np.asarray(m, dtype=float)
    if np.any(m <= 0) or np.any(m > 0.5):
        raise ValueError("quantile is defined on (0, 0.5]")
    out = np.exp(p.log_gamma * (1.0 - 0.5 / m))
    return float(out) if m.ndim == 0 else out


def restricted_kl(alpha, beta_hat, p=PriorParams()):
    """KL divergence between P restricted to [alpha*beta_hat, beta_hat] and P.

    Equal to -log of the interval's prior mass.
    """
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    if not 0 < beta_hat <= 1:
        raise ValueError(f"beta_hat must be in (0, 1], got {beta_hat}")
    return -math.log(interval_mass(alpha * beta_hat, beta_hat, p))


def restricted_kl_upper(alpha, beta_hat, p=PriorParams()):
    """The relaxation log((log gamma + log(1/(alpha beta_hat)))^2 / (0.5 log gamma log(1/alpha)))."""
    lg = p.log_gamma
    return math.log((lg - math.log(alpha * beta_hat)) ** 2 / (0.5 * lg * math.log(1.0 / alpha)))
