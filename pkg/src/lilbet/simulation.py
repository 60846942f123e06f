"""Monte Carlo checks of the betting guarantees.

Three experiments, all over bounded martingale difference sequences:

* coverage: does |sum_g| ever leave the confidence radius within the horizon?
* doob: does the mixture wealth ever reach 1/delta within the horizon?
* wealth bound: how close does the wealth get to its guaranteed lower bound?

Replication ``r`` of a run with seed ``s`` draws from ``default_rng([s, r])``,
so results do not depend on how replications are split across workers.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
import math
import time

import numpy as np

from .betting_engine import DEFAULT_NODES, make_grid, mixture_path
from .bounds import BoundForm, BoundParams, confidence_radius, wealth_lower_bound
from .prior import PriorParams

WILSON_Z = 1.959963984540054
MODEL_KINDS = ("rademacher", "uniform", "scaled_bernoulli", "sign_flip", "zero")


@dataclass(frozen=True)
class MartingaleModel:
    """Distribution of the increments g_t; every kind has E[g_t | past] = 0.

    rademacher        +-1 with probability 1/2
    uniform           uniform on [-1, 1]
    scaled_bernoulli  1-p with probability p, -p otherwise
    sign_flip         -sign(S_{t-1}) * u_t with u_t uniform on [-1, 1] (sign(0) = 1)
    zero              g_t = 0
    """

    kind: str = "rademacher"
    p: float = 0.5

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"unknown model {self.kind!r}; expected one of {MODEL_KINDS}")
        if self.kind == "scaled_bernoulli" and not 0 < self.p < 1:
            raise ValueError(f"scaled_bernoulli needs p in (0, 1), got {self.p}")

    @classmethod
    def parse(cls, text):
        """'rademacher', 'scaled_bernoulli:0.3', ..."""
        kind, _, arg = text.partition(":")
        return cls(kind, float(arg)) if arg else cls(kind)

    def __str__(self):
        return f"{self.kind}:{self.p}" if self.kind == "scaled_bernoulli" else self.kind


def generate(model, T, seed):
    """A length-T increment sequence, deterministic in `seed`."""
    if T < 1:
        raise ValueError("T must be >= 1")
    rng = np.random.default_rng(seed)
    kind = model.kind
    if kind == "rademacher":
        return rng.choice(np.array([-1.0, 1.0]), size=T)
    if kind == "uniform":
        return rng.uniform(-1.0, 1.0, size=T)
    if kind == "scaled_bernoulli":
        p = model.p
        return np.where(rng.random(T) < p, 1.0 - p, -p)
    if kind == "zero":
        return np.zeros(T)
    u = rng.uniform(-1.0, 1.0, size=T)
    g = np.empty(T)
    s = 0.0
    for t in range(T):
        g[t] = -u[t] if s > 0 else u[t]
        s += g[t]
    return g


def rep_seed(seed, rep):
    return [seed, rep]


def wilson_upper(k, n, z=WILSON_Z):
    """Upper end of the two-sided Wilson score interval for k successes in n."""
    phat = k / n
    z2 = z * z
    centre = phat + z2 / (2 * n)
    half = z * math.sqrt(phat * (1 - phat) / n + z2 / (4 * n * n))
    return min(1.0, (centre + half) / (1 + z2 / n))


@dataclass(frozen=True)
class SimConfig:
    model: MartingaleModel = MartingaleModel()
    horizon: int = 1000
    reps: int = 100
    seed: int = 0
    bound: BoundParams = BoundParams()
    form: BoundForm = BoundForm.EXACT
    node_count: int = DEFAULT_NODES
    workers: int = 1

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if self.reps < 1:
            raise ValueError("reps must be >= 1")
        object.__setattr__(self, "form", BoundForm(self.form))

    @property
    def prior(self):
        return PriorParams(self.bound.gamma)


@dataclass
class CoverageReport:
    reps: int
    violations: int
    rate: float
    wilson_upper_95: float
    runtime_sec: float = field(default=0.0, compare=False)

    @classmethod
    def from_counts(cls, violations, reps, runtime_sec=0.0, **extra):
        return cls(reps, violations, violations / reps, wilson_upper(violations, reps), runtime_sec, **extra)

    def passed(self, delta, slack=0.02):
        return self.rate <= delta and self.wilson_upper_95 <= delta + slack

    def results(self):
        return {"reps": self.reps, "violations": self.violations, "rate": self.rate,
                "wilson_upper_95": self.wilson_upper_95}


@dataclass
class DoobReport(CoverageReport):
    """Exceedance counts plus the Monte Carlo mean of the final wealth."""

    mean_final_wealth: float = 0.0
    se_final_wealth: float = 0.0

    def results(self):
        out = super().results()
        out.update(mean_final_wealth=self.mean_final_wealth, se_final_wealth=self.se_final_wealth)
        return out


@dataclass
class SlackReport:
    reps: int
    min_slack: float
    argmin_t: int
    argmin_rep: int
    runtime_sec: float = field(default=0.0, compare=False)

    def passed(self, tol=1e-8):
        return self.min_slack >= -tol

    def results(self):
        return {"reps": self.reps, "min_slack": self.min_slack, "argmin_t": self.argmin_t,
                "argmin_rep": self.argmin_rep}


def _map(fn, cfg):
    reps = range(cfg.reps)
    if cfg.workers <= 1:
        return [fn(r) for r in reps]
    with ProcessPoolExecutor(cfg.workers) as pool:
        return list(pool.map(fn, reps, chunksize=max(1, cfg.reps // (4 * cfg.workers))))


def _coverage_rep(cfg, rep):
    g = generate(cfg.model, cfg.horizon, rep_seed(cfg.seed, rep))
    s = np.cumsum(g)
    v = np.cumsum(g * g)
    return bool(np.any(np.abs(s) > confidence_radius(v, cfg.bound, cfg.form)))


def coverage_experiment(cfg):
    """Fraction of paths whose partial sum leaves the radius at some t <= horizon."""
    start = time.perf_counter()
    hits = _map(partial(_coverage_rep, cfg), cfg)
    return CoverageReport.from_counts(sum(hits), cfg.reps, time.perf_counter() - start)


def _doob_rep(cfg, grid, rep):
    g = generate(cfg.model, cfg.horizon, rep_seed(cfg.seed, rep))
    log_wealth, _ = mixture_path(g, grid)
    return float(log_wealth.max()), float(log_wealth[-1])


def doob_experiment(cfg):
    """Fraction of paths with max_{t <= horizon} Wealth_t >= 1/delta."""
    start = time.perf_counter()
    grid = make_grid(cfg.prior, cfg.node_count)
    out = _map(partial(_doob_rep, cfg, grid), cfg)
    threshold = -math.log(cfg.bound.delta)
    exceed = sum(top >= threshold for top, _ in out)
    final = np.exp([last for _, last in out])
    se = float(final.std(ddof=1) / math.sqrt(cfg.reps)) if cfg.reps > 1 else math.inf
    return DoobReport.from_counts(
        exceed, cfg.reps, time.perf_counter() - start,
        mean_final_wealth=float(final.mean()), se_final_wealth=se,
    )


def _slack_rep(cfg, grid, rep):
    g = generate(cfg.model, cfg.horizon, rep_seed(cfg.seed, rep))
    log_wealth, _ = mixture_path(g, grid)
    slack = np.exp(log_wealth) - wealth_lower_bound(np.cumsum(g), np.cumsum(g * g), cfg.bound)
    i = int(np.argmin(slack))
    return float(slack[i]), i + 1


def wealth_bound_experiment(cfg):
    """Minimum over paths and t <= horizon of Wealth_t minus its guaranteed lower bound."""
    start = time.perf_counter()
    grid = make_grid(cfg.prior, cfg.node_count)
    out = _map(partial(_slack_rep, cfg, grid), cfg)
    rep = min(range(cfg.reps), key=lambda r: out[r][0])
    return SlackReport(cfg.reps, out[rep][0], out[rep][1], rep, time.perf_counter() - start)
