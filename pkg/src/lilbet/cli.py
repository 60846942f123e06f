"""Command line interface.

    lilbet radius --sum-g2 100 --delta 0.05 --form simple
    lilbet track stream.txt --out track.csv
    lilbet simulate coverage --horizon 10000 --reps 2000 --out cov.json

Exit codes: 0 ok, 2 usage or input error, 3 a simulated guarantee failed.
"""
import argparse
import json
import sys
import time

from . import __version__
from .betting_engine import DEFAULT_NODES, init, refined_node_count
from .bounds import BoundForm, BoundParams, a_t, confidence_radius
from .prior import PriorParams
from .simulation import (
    MartingaleModel,
    SimConfig,
    coverage_experiment,
    doob_experiment,
    wealth_bound_experiment,
)

EXIT_USAGE = 2
EXIT_GUARANTEE = 3

TRACK_COLUMNS = ("t", "g", "bet", "wealth", "sum_g", "sum_g2", "radius", "covered")

_NUM = {"type": "number"}
_COUNT = {"type": "integer", "minimum": 0}
MANIFEST_SCHEMA = {
    "type": "object",
    "required": ["command", "argv", "params", "seed", "version", "runtime_sec"],
    "properties": {
        "command": {"type": "string"},
        "argv": {"type": "array", "items": {"type": "string"}},
        "params": {"type": "object"},
        "seed": {"type": ["integer", "null"]},
        "version": {"type": "string"},
        "runtime_sec": _NUM,
    },
}
REPORT_SCHEMA = {
    "type": "object",
    "required": ["manifest", "params", "results"],
    "properties": {
        "manifest": MANIFEST_SCHEMA,
        "params": {"type": "object"},
        "results": {
            "oneOf": [
                {"type": "object", "required": ["radius", "a_t"],
                 "properties": {"radius": _NUM, "a_t": _NUM}},
                {"type": "object", "required": ["reps", "violations", "rate", "wilson_upper_95", "passed"],
                 "properties": {"reps": _COUNT, "violations": _COUNT, "rate": _NUM,
                                "wilson_upper_95": _NUM, "passed": {"type": "boolean"},
                                "mean_final_wealth": _NUM, "se_final_wealth": _NUM}},
                {"type": "object", "required": ["reps", "min_slack", "argmin_t", "argmin_rep", "passed"],
                 "properties": {"reps": _COUNT, "min_slack": _NUM, "argmin_t": _COUNT,
                                "argmin_rep": _COUNT, "passed": {"type": "boolean"}}},
            ]
        },
    },
}


def fmt(x):
    return format(x, ".17g")


def manifest(command, params, seed, runtime_sec, argv):
    return {
        "command": command,
        "argv": list(argv),
        "params": params,
        "seed": seed,
        "version": __version__,
        "runtime_sec": runtime_sec,
    }


def _bound_params(parser, args):
    try:
        return BoundParams(alpha=args.alpha, gamma=args.gamma, delta=args.delta)
    except ValueError as e:
        parser.error(str(e))


def _add_bound_flags(p, delta=0.05):
    p.add_argument("--delta", type=float, default=delta)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--gamma", type=float, default=PriorParams().gamma)
    p.add_argument("--form", choices=[f.value for f in BoundForm], default="exact")


def build_parser():
    parser = argparse.ArgumentParser(prog="lilbet", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("radius", help="time-uniform radius for a given sum of squares")
    p.add_argument("--sum-g2", type=float, required=True)
    _add_bound_flags(p)

    p = sub.add_parser("track", help="run the bettor over a file of outcomes, one per line")
    p.add_argument("input")
    _add_bound_flags(p)
    p.add_argument("--nodes", type=int, default=DEFAULT_NODES)
    p.add_argument("--strict", action="store_true",
                   help="double --nodes until the wealth path is stable to 1e-6")
    p.add_argument("--out", default="-")

    p = sub.add_parser("simulate", help="Monte Carlo check of a guarantee")
    p.add_argument("experiment", choices=["coverage", "doob", "wealth-bound"])
    p.add_argument("--model", default="rademacher",
                   help="rademacher | uniform | scaled_bernoulli:P | sign_flip | zero")
    p.add_argument("--horizon", type=int, default=1000)
    p.add_argument("--reps", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    _add_bound_flags(p)
    p.add_argument("--nodes", type=int, default=DEFAULT_NODES)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--slack", type=float, default=0.02,
                   help="allowed excess of the Wilson upper bound over delta")
    p.add_argument("--tol", type=float, default=1e-8,
                   help="allowed negative slack for wealth-bound")
    p.add_argument("--out", default="-")
    return parser


def _open_out(path):
    return sys.stdout if path == "-" else open(path, "w", newline="")


def cmd_radius(parser, args, argv):
    bp = _bound_params(parser, args)
    if args.sum_g2 < 0:
        parser.error("--sum-g2 must be >= 0")
    start = time.perf_counter()
    r = confidence_radius(args.sum_g2, bp, args.form)
    at = a_t(args.sum_g2, bp)
    params = {"sum_g2": args.sum_g2, "alpha": bp.alpha, "gamma": bp.gamma,
              "delta": bp.delta, "form": args.form}
    doc = {
        "manifest": manifest("radius", params, None, time.perf_counter() - start, argv),
        "params": params,
        "results": {"radius": r, "a_t": at},
    }
    print(json.dumps(doc))
    return 0


def read_stream(path):
    """Outcomes from a one-value-per-line file; raises ValueError naming the line."""
    values = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text:
                continue
            try:
                g = float(text)
            except ValueError:
                raise ValueError(f"line {lineno}: not a number: {text!r}") from None
            if not -1.0 <= g <= 1.0:
                raise ValueError(f"line {lineno}: out of range: {text}")
            values.append(g)
    return values


def cmd_track(parser, args, argv):
    bp = _bound_params(parser, args)
    try:
        values = read_stream(args.input)
    except OSError as e:
        parser.error(f"cannot read {args.input}: {e.strerror}")
    except ValueError as e:
        parser.error(str(e))
    start = time.perf_counter()
    prior = PriorParams(bp.gamma)
    nodes = args.nodes
    try:
        if args.strict and values:
            nodes = refined_node_count(values, prior, nodes)
        state = init(prior, nodes)
    except ValueError as e:
        parser.error(str(e))

    rows = []
    for g in values:
        bet = state.bet()
        state = state.observe(g)
        radius = confidence_radius(state.sum_g2, bp, args.form)
        covered = int(abs(state.sum_g) <= radius)
        rows.append((state.t, g, bet, state.wealth(), state.sum_g, state.sum_g2, radius, covered))

    params = {"input": args.input, "alpha": bp.alpha, "gamma": bp.gamma, "delta": bp.delta,
              "form": args.form, "nodes": nodes, "strict": args.strict}
    head = manifest("track", params, None, time.perf_counter() - start, argv)
    out = _open_out(args.out)
    try:
        out.write("# manifest: " + json.dumps(head) + "\n")
        out.write(",".join(TRACK_COLUMNS) + "\n")
        for t, *reals, covered in rows:
            out.write(",".join([str(t), *map(fmt, reals), str(covered)]) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_simulate(parser, args, argv):
    bp = _bound_params(parser, args)
    try:
        cfg = SimConfig(
            model=MartingaleModel.parse(args.model),
            horizon=args.horizon,
            reps=args.reps,
            seed=args.seed,
            bound=bp,
            form=args.form,
            node_count=args.nodes,
            workers=args.workers,
        )
        if args.experiment == "coverage":
            report = coverage_experiment(cfg)
            ok = report.passed(bp.delta, args.slack)
        elif args.experiment == "doob":
            report = doob_experiment(cfg)
            ok = report.passed(bp.delta, args.slack)
        else:
            report = wealth_bound_experiment(cfg)
            ok = report.passed(args.tol)
    except ValueError as e:
        parser.error(str(e))

    params = {"experiment": args.experiment, "model": str(cfg.model), "horizon": cfg.horizon,
              "reps": cfg.reps, "seed": cfg.seed, "alpha": bp.alpha, "gamma": bp.gamma,
              "delta": bp.delta, "form": cfg.form.value, "node_count": cfg.node_count,
              "workers": cfg.workers, "slack": args.slack, "tol": args.tol}
    results = report.results()
    results["passed"] = ok
    doc = {
        "manifest": manifest(f"simulate {args.experiment}", params, cfg.seed, report.runtime_sec, argv),
        "params": params,
        "results": results,
    }
    out = _open_out(args.out)
    try:
        json.dump(doc, out, indent=2)
        out.write("\n")
    finally:
        if out is not sys.stdout:
            out.close()
    if not ok:
        print(f"guarantee check failed: {json.dumps(results)}", file=sys.stderr)
        return EXIT_GUARANTEE
    return 0


COMMANDS = {"radius": cmd_radius, "track": cmd_track, "simulate": cmd_simulate}


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    return COMMANDS[args.command](parser, args, argv)


if __name__ == "__main__":
    sys.exit(main())
