"""Acceptance suite: one test per criterion, reported in the terminal summary.

Monte Carlo criteria run at full size and take several minutes in total.
"""
import math
import time

import numpy as np
import pytest
from scipy import integrate

from lilbet.betting_engine import make_grid, mixture_path
from lilbet.bounds import (
    BoundForm,
    BoundParams,
    a_t,
    confidence_radius,
    log_factor_minorant,
    scaled_potential,
    surrogate_maximizer,
    surrogate_objective,
)
from lilbet.prior import PriorParams, density, interval_mass, positive_cdf, quantile
from lilbet.simulation import (
    MartingaleModel,
    SimConfig,
    coverage_experiment,
    doob_experiment,
    generate,
    wealth_bound_experiment,
)
from lilbet.special_functions import (
    f,
    f_conjugate,
    lambert_w_minus1,
    psi,
    psi_inv,
    psi_inv_upper_log,
    psi_inv_upper_simple,
)

slow = pytest.mark.slow


def criterion(label):
    return pytest.mark.criterion(label)


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.sec = time.perf_counter() - self.start


@criterion("1 conjugate oracle")
def test_conjugate_oracle(record_property):
    with Timer() as tm:
        x = np.random.default_rng(1).uniform(-50, 50, 1000)
        eta = np.linspace(-0.999999, 0.999999, 10**6)
        f_eta = f(eta)
        best = np.empty_like(x)
        buf = np.empty((50, eta.size))
        for i in range(0, len(x), 50):
            np.multiply(x[i:i + 50, None], eta, out=buf)
            buf -= f_eta
            best[i:i + 50] = buf.max(axis=1)
        err = np.abs(f_conjugate(x) - best).max()
        minorant_gap = (f_conjugate(x) - x * x / (2 * (np.abs(x) + 1))).min()
    record_property("max_err", f"{err:.2e}")
    record_property("sec", f"{tm.sec:.1f}")
    assert err <= 1e-4
    assert minorant_gap >= 0
    assert tm.sec < 10


@criterion("2 lambert and psi inverses")
def test_inverses(record_property):
    with Timer() as tm:
        xs = np.concatenate([[-0.3, -0.1, -0.01, -1e-6],
                             -np.logspace(-300, 0, 2000) / math.e * (1 - 1e-15)])
        w = lambert_w_minus1(xs)
        w_err = np.abs(w * np.exp(w) - xs).max()
        ys = np.array([1e-4, 0.1, 1, 10, 100])
        y_err = np.abs(psi(psi_inv(ys)) - ys).max()
        grid = np.linspace(0, 1e3, 10**4)
        inv, lo, hi = psi_inv(grid), psi_inv_upper_log(grid), psi_inv_upper_simple(grid)
    record_property("w_roundtrip", f"{w_err:.1e}")
    record_property("psi_roundtrip", f"{y_err:.1e}")
    record_property("sec", f"{tm.sec:.2f}")
    assert np.all(w <= -1)
    assert w_err <= 1e-10
    assert y_err <= 1e-10
    assert np.all(inv <= lo) and np.all(lo <= hi)
    assert tm.sec < 5


@criterion("3 prior correctness")
def test_prior(record_property):
    with Timer() as tm:
        worst = 0.0
        for gamma in (2.0, math.e, 10.0):
            p = PriorParams(gamma)
            assert 2 * interval_mass(0.0, 1.0, p) == pytest.approx(1.0, abs=1e-9)
            # quadrature in log(beta), where the density is smooth
            total = 2 * integrate.quad(lambda u: density(math.exp(u), p) * math.exp(u), -np.inf, 0,
                                       epsabs=1e-13, epsrel=1e-13, limit=200)[0]
            assert total == pytest.approx(1.0, abs=1e-9)
        rng = np.random.default_rng(3)
        p = PriorParams()
        for _ in range(100):
            a, b = np.sort(rng.uniform(0, 1, 2))
            q = integrate.quad(lambda u: density(math.exp(u), p) * math.exp(u), math.log(a), math.log(b),
                               epsabs=1e-14, epsrel=1e-13)[0]
            worst = max(worst, abs(interval_mass(a, b, p) - q))
        m = np.linspace(0.005, 0.5, 100)
        rt = np.abs(positive_cdf(quantile(m, p), p) - m).max()
    record_property("quad_err", f"{worst:.1e}")
    record_property("roundtrip", f"{rt:.1e}")
    assert worst <= 1e-9
    assert rt <= 1e-10
    assert tm.sec < 5


@criterion("4 wealth identity and grid refinement")
def test_wealth_identity(record_property):
    models = [MartingaleModel("rademacher"), MartingaleModel("uniform"), MartingaleModel("sign_flip")]
    rng = np.random.default_rng(4)
    coarse, fine = make_grid(node_count=512), make_grid(node_count=1024)
    ident, refine = 0.0, 0.0
    with Timer() as tm:
        for i in range(200):
            g = generate(models[i % 3], int(rng.integers(1, 301)), [4, i])
            lw, bets = mixture_path(g, coarse)
            direct = 1.0 + np.cumsum(bets * g)
            ident = max(ident, np.max(np.abs(np.exp(lw) - direct) / np.abs(direct)))
            lw_fine, _ = mixture_path(g, fine)
            refine = max(refine, np.max(np.abs(np.expm1(lw_fine - lw))))
    record_property("identity_rel", f"{ident:.1e}")
    record_property("refine_rel", f"{refine:.1e}")
    record_property("sec", f"{tm.sec:.1f}")
    assert ident <= 1e-8
    assert refine < 1e-6
    assert tm.sec < 60


@slow
@criterion("5 wealth lower bound validity")
def test_wealth_bound_validity(record_property):
    worst = math.inf
    with Timer() as tm:
        for alpha in (0.25, 0.5, 0.75):
            for gamma in (2.0, math.e, 10.0):
                cfg = SimConfig(model=MartingaleModel("uniform"), horizon=300, reps=500, seed=5,
                                bound=BoundParams(alpha=alpha, gamma=gamma))
                r = wealth_bound_experiment(cfg)
                worst = min(worst, r.min_slack)
                assert r.passed(1e-8), (alpha, gamma, r)
    record_property("min_slack", f"{worst:.3e}")
    record_property("sec", f"{tm.sec:.0f}")
    assert tm.sec < 300


@slow
@criterion("6 coverage of the radius")
def test_coverage(record_property):
    with Timer() as tm:
        for form in BoundForm:
            cfg = SimConfig(horizon=10**4, reps=2000, seed=6, bound=BoundParams(delta=0.05), form=form)
            r = coverage_experiment(cfg)
            record_property(form.value, f"{r.violations}/{r.reps} wilson={r.wilson_upper_95:.4f}")
            assert r.rate <= 0.05
            assert r.wilson_upper_95 <= 0.07
    record_property("sec", f"{tm.sec:.0f}")
    assert tm.sec < 600


@pytest.fixture(scope="module")
def doob_reports():
    out = {}
    for delta in (0.05, 0.1):
        t0 = time.perf_counter()
        out[delta] = doob_experiment(SimConfig(horizon=5000, reps=2000, seed=7, bound=BoundParams(delta=delta)))
        out[delta, "sec"] = time.perf_counter() - t0
    return out


@slow
@criterion("7a maximal inequality exceedance rate")
def test_doob_rate(doob_reports, record_property):
    for delta in (0.05, 0.1):
        r = doob_reports[delta]
        record_property(f"delta={delta}", f"{r.violations}/{r.reps}")
        assert r.rate <= delta
        assert doob_reports[delta, "sec"] < 600


@slow
@criterion("7b final wealth mean within 4 SE of 1")
def test_doob_mean(doob_reports, record_property):
    # Expected to fail at this horizon: see README, "Known red criterion".
    for delta in (0.05, 0.1):
        r = doob_reports[delta]
        record_property(f"delta={delta}", f"mean={r.mean_final_wealth:.4f} se={r.se_final_wealth:.4f}")
    for delta in (0.05, 0.1):
        r = doob_reports[delta]
        assert abs(r.mean_final_wealth - 1.0) <= 4 * r.se_final_wealth


@criterion("8 proof inequalities")
def test_proof_inequalities(record_property):
    with Timer() as tm:
        x = np.linspace(-1, 1, 2001)[:, None]
        beta = np.linspace(-0.9999, 0.9999, 2001)[None, :]
        gap_a = (np.log1p(beta * x) - log_factor_minorant(beta, x)).min()
        xs = np.linspace(1e-4, 1, 2000)
        rise_b = max(np.diff(scaled_potential(xs, b)).max() for b in np.linspace(-0.9999, 0.9999, 201))
        rng = np.random.default_rng(8)
        grid = np.linspace(-0.999999, 0.999999, 400_001)
        err_c = 0.0
        for S, V in zip(rng.uniform(-100, 100, 100), rng.uniform(0.01, 100, 100)):
            bh = surrogate_maximizer(S, V)
            top = psi(abs(S) / V) * V
            err_c = max(err_c, abs(surrogate_objective(bh, S, V) - top),
                        surrogate_objective(grid, S, V).max() - top)
    record_property("a", f"{gap_a:.1e}")
    record_property("b", f"{rise_b:.1e}")
    record_property("c", f"{err_c:.1e}")
    assert gap_a >= -1e-10
    assert rise_b <= 1e-10
    assert err_c <= 1e-10
    assert tm.sec < 30


@criterion("9 bound form ordering and monotonicity")
def test_form_ordering(record_property):
    checked = skipped = 0
    with Timer() as tm:
        V = np.concatenate([[0.0], np.logspace(-6, 8, 300)])
        deltas = np.array([0.001, 0.01, 0.05, 0.1, 0.3, 0.6, 0.9, 0.999])
        for alpha in (0.05, 0.25, 0.5, 0.75, 0.95):
            for gamma in (1.1, 2.0, math.e, 10.0, 100.0):
                prev = None
                for delta in deltas:
                    p = BoundParams(alpha, gamma, delta)
                    r = {f: confidence_radius(V, p, f) for f in BoundForm}
                    assert np.all(r[BoundForm.EXACT] <= r[BoundForm.LOG] * (1 + 1e-12))
                    big = np.log(a_t(V, p) / delta) >= 1
                    assert np.all(r[BoundForm.LOG][big] <= r[BoundForm.SIMPLE][big] * (1 + 1e-12))
                    checked += int(big.sum())
                    skipped += int((~big).sum())
                    for f in BoundForm:
                        assert np.all(np.diff(r[f]) >= 0)
                    if prev is not None:
                        # larger delta, smaller radius
                        for f in BoundForm:
                            assert np.all(r[f] <= prev[f])
                    prev = r
    record_property("log_vs_simple_checked", checked)
    record_property("skipped", skipped)
    assert tm.sec < 10
