"""Run the mixture bettor on one simulated path and write the track CSV.

    python scripts/track_demo.py --model uniform --horizon 2000 --out track.csv
"""
import argparse
import subprocess
import sys
import tempfile

from lilbet.simulation import MartingaleModel, generate


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--model", default="uniform")
    ap.add_argument("--horizon", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="track.csv")
    args, rest = ap.parse_known_args()

    g = generate(MartingaleModel.parse(args.model), args.horizon, args.seed)
    with tempfile.NamedTemporaryFile("w", suffix=".txt", delete=False) as fh:
        fh.write("\n".join(repr(float(x)) for x in g) + "\n")
    cmd = [sys.executable, "-m", "lilbet", "track", fh.name, "--out", args.out, *rest]
    code = subprocess.call(cmd)
    if code == 0:
        with open(args.out) as fh:
            rows = fh.read().splitlines()[2:]
        last = rows[-1].split(",")
        covered = sum(r.endswith(",1") for r in rows)
        print(f"T={last[0]} wealth={float(last[3]):.4g} sum_g={float(last[4]):.3f} "
              f"radius={float(last[6]):.3f} covered {covered}/{len(rows)} steps -> {args.out}")
    return code


if __name__ == "__main__":
    sys.exit(main())
