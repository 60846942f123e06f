"""Mixture coin-betting strategy.

The bettor's wealth is the prior average of the wealths of all constant
fraction bettors,

    Wealth_t = E_{beta ~ P}[ prod_{i<=t} (1 + beta g_i) ],

and the bet for round t is E_P[beta prod_{i<t} (1 + beta g_i)]. Expectations
are taken with composite Gauss-Legendre rules in the prior's quantile
coordinate, where P is uniform; the negative half mirrors the positive one.
"""
from dataclasses import dataclass, field, replace
import math

import numpy as np

from .prior import PriorParams, quantile

POINTS_PER_PANEL = 16
MIN_NODES = 16
DEFAULT_NODES = 512


@dataclass(frozen=True)
class QuadratureGrid:
    """Nodes/weights for the positive half of the prior, m in (0, 0.5)."""

    nodes_m: np.ndarray
    weights: np.ndarray
    nodes_beta: np.ndarray
    prior: PriorParams

    @property
    def size(self):
        return len(self.nodes_m)


def make_grid(prior=PriorParams(), node_count=DEFAULT_NODES):
    """Composite Gauss-Legendre rule with `node_count` nodes on (0, 0.5)."""
    if node_count < MIN_NODES or node_count % POINTS_PER_PANEL:
        raise ValueError(
            f"node_count must be a multiple of {POINTS_PER_PANEL} and >= {MIN_NODES}, got {node_count}"
        )
    x, w = np.polynomial.legendre.leggauss(POINTS_PER_PANEL)
    panels = node_count // POINTS_PER_PANEL
    h = 0.5 / panels
    left = h * np.arange(panels)
    nodes_m = (left[:, None] + 0.5 * h * (x + 1.0)).ravel()
    weights = np.tile(0.5 * h * w, panels)
    return QuadratureGrid(nodes_m, weights, quantile(nodes_m, prior), prior)


@dataclass(frozen=True)
class BettingState:
    """Sufficient statistics of the observed stream plus per-node log-products.

    ``log_prod_pos[j]`` is sum_i log(1 + beta_j g_i), ``log_prod_neg[j]`` the
    same for -beta_j. A node whose factor hits zero stays at -inf.
    """

    grid: QuadratureGrid
    t: int = 0
    sum_g: float = 0.0
    sum_g2: float = 0.0
    log_prod_pos: np.ndarray = field(default=None, repr=False)
    log_prod_neg: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.log_prod_pos is None:
            object.__setattr__(self, "log_prod_pos", np.zeros(self.grid.size))
        if self.log_prod_neg is None:
            object.__setattr__(self, "log_prod_neg", np.zeros(self.grid.size))

    @property
    def prior(self):
        return self.grid.prior

    def _shift(self):
        m = max(self.log_prod_pos.max(), self.log_prod_neg.max())
        return m if np.isfinite(m) else 0.0

    def log_wealth(self):
        m = self._shift()
        s = self.grid.weights @ (np.exp(self.log_prod_pos - m) + np.exp(self.log_prod_neg - m))
        with np.errstate(divide="ignore"):
            return float(np.log(s) + m)

    def wealth(self):
        """Current wealth; inf once it leaves the double range."""
        with np.errstate(over="ignore"):
            return float(np.exp(self.log_wealth()))

    def bet(self):
        """Signed bet for the next round, given the t observations so far."""
        m = self._shift()
        diff = np.exp(self.log_prod_pos - m) - np.exp(self.log_prod_neg - m)
        with np.errstate(over="ignore"):
            return float(self.grid.weights @ (self.grid.nodes_beta * diff) * np.exp(m))

    def beta_hat(self):
        if self.sum_g == 0:
            return 0.0
        return self.sum_g / (abs(self.sum_g) + self.sum_g2)

    def observe(self, g):
        """Return the state after outcome `g` in [-1, 1]."""
        g = float(g)
        if not -1.0 <= g <= 1.0:
            raise ValueError(f"outcome must lie in [-1, 1], got {g}")
        bg = self.grid.nodes_beta * g
        with np.errstate(divide="ignore"):
            pos = self.log_prod_pos + np.log1p(bg)
            neg = self.log_prod_neg + np.log1p(-bg)
        return replace(
            self,
            t=self.t + 1,
            sum_g=self.sum_g + g,
            sum_g2=self.sum_g2 + g * g,
            log_prod_pos=pos,
            log_prod_neg=neg,
        )


def init(prior=PriorParams(), node_count=DEFAULT_NODES):
    return BettingState(make_grid(prior, node_count))


def mixture_path(g, grid, block=256):
    """Log-wealth after each round and the bet placed before it, for a whole path.

    Multiplies the node factors directly (cumulative products in blocks,
    renormalized between blocks) instead of summing logs; this is the fast
    path used by the simulations.

    Returns ``(log_wealth, bets)``, both of length len(g).
    """
    g = np.asarray(g, dtype=float)
    if np.any(np.abs(g) > 1):
        raise ValueError("outcomes must lie in [-1, 1]")
    betas = np.concatenate([grid.nodes_beta, -grid.nodes_beta])
    w = np.concatenate([grid.weights, grid.weights])
    wb = w * betas
    T = len(g)
    log_wealth = np.empty(T)
    fraction = np.empty(T)
    carry = np.ones(len(betas))
    log_scale = 0.0
    for s in range(0, T, block):
        factors = 1.0 + np.outer(g[s:s + block], betas)
        prods = np.cumprod(factors, axis=0)
        prods *= carry
        n = len(prods)
        before = np.vstack([carry, prods[:-1]])
        # bet as a fraction of the wealth it is placed from
        fraction[s:s + n] = (before @ wb) / (before @ w)
        with np.errstate(divide="ignore"):
            log_wealth[s:s + n] = np.log(prods @ w) + log_scale
        carry = prods[-1]
        top = carry.max()
        if top > 0:
            carry = carry / top
            log_scale += math.log(top)
    prev = np.concatenate([[0.0], log_wealth[:-1]])
    with np.errstate(over="ignore"):
        bets = fraction * np.exp(prev)
    return log_wealth, bets


def refined_node_count(g, prior=PriorParams(), node_count=DEFAULT_NODES, rtol=1e-6, max_nodes=16384):
    """Smallest node count (doubling from `node_count`) whose wealth path on `g`
    changes by less than `rtol` relative when the grid is doubled."""
    n = node_count
    coarse, _ = mixture_path(g, make_grid(prior, n))
    while n < max_nodes:
        fine, _ = mixture_path(g, make_grid(prior, 2 * n))
        if np.all(np.abs(np.expm1(fine - coarse)) < rtol):
            return n
        n, coarse = 2 * n, fine
    raise RuntimeError(f"quadrature did not stabilize below {max_nodes} nodes")
