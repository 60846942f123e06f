"""Violation rate of the deviation radius across models, forms and delta.

    python scripts/coverage_sweep.py --horizon 10000 --reps 2000 --out sweep.csv
"""
import argparse
import csv
import sys

from lilbet.bounds import BoundForm, BoundParams
from lilbet.simulation import MartingaleModel, SimConfig, coverage_experiment

MODELS = ["rademacher", "uniform", "scaled_bernoulli:0.1", "sign_flip"]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--horizon", type=int, default=10_000)
    ap.add_argument("--reps", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--deltas", type=float, nargs="+", default=[0.01, 0.05, 0.2])
    ap.add_argument("--alpha", type=float, default=0.5)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()

    out = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(out)
    w.writerow(["model", "form", "delta", "reps", "violations", "rate", "wilson_upper_95", "runtime_sec"])
    for name in MODELS:
        for delta in args.deltas:
            for form in BoundForm:
                cfg = SimConfig(model=MartingaleModel.parse(name), horizon=args.horizon, reps=args.reps,
                                seed=args.seed, bound=BoundParams(alpha=args.alpha, delta=delta),
                                form=form, workers=args.workers)
                r = coverage_experiment(cfg)
                w.writerow([name, form.value, delta, r.reps, r.violations, r.rate,
                            f"{r.wilson_upper_95:.4f}", f"{r.runtime_sec:.2f}"])
                out.flush()


if __name__ == "__main__":
    main()
