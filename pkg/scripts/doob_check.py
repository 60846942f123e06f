"""Where the mean of the final wealth lives, for Rademacher increments.

A Rademacher path's wealth depends only on its count k of +1s, so the law of
Wealth_T is exact over k ~ Binomial(T, 1/2). The script reports E[Wealth_T]
(which is 1) and the share of it carried by outcomes rarer than 1/reps, i.e.
the part a Monte Carlo run with `reps` paths will usually not see.

    python scripts/doob_check.py --horizons 20 100 1000 5000 --reps 2000
"""
import argparse
import math

import numpy as np
from scipy import stats

from lilbet.betting_engine import make_grid, mixture_path


def wealth_by_count(T, grid):
    """Wealth_T for each k in 0..T, from the path of k ones then T-k minus ones."""
    out = np.empty(T + 1)
    for k in range(T + 1):
        g = np.concatenate([np.ones(k), -np.ones(T - k)])
        out[k] = mixture_path(g, grid)[0][-1]
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--horizons", type=int, nargs="+", default=[20, 100, 1000, 5000])
    ap.add_argument("--reps", type=int, default=2000)
    ap.add_argument("--nodes", type=int, default=512)
    args = ap.parse_args()

    grid = make_grid(node_count=args.nodes)
    print(f"{'T':>6} {'E[W]':>10} {'median W':>10} {'hidden share':>13} {'sd/sqrt(reps)':>14}")
    for T in args.horizons:
        log_w = wealth_by_count(T, grid)
        log_pk = stats.binom.logpmf(np.arange(T + 1), T, 0.5)
        # E[W] and E[W^2] in log space; both are sums over k
        log_terms = log_pk + log_w
        mean = math.exp(np.logaddexp.reduce(log_terms))
        log_m2 = np.logaddexp.reduce(log_pk + 2 * log_w)
        sd = math.sqrt(max(math.exp(min(log_m2, 700.0)) - mean ** 2, 0.0))
        rare = log_pk <= -math.log(args.reps)
        hidden = math.exp(np.logaddexp.reduce(log_terms[rare]) - math.log(mean)) if rare.any() else 0.0
        cdf = np.cumsum(np.exp(log_pk[np.argsort(log_w)]))
        median = math.exp(np.sort(log_w)[np.searchsorted(cdf, 0.5)])
        print(f"{T:>6} {mean:>10.6f} {median:>10.4f} {hidden:>13.3f} {sd / math.sqrt(args.reps):>14.3g}")


if __name__ == "__main__":
    main()
