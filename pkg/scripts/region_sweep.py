"""Sweep the joint capacity over the (omega, rho) plane and write a CSV grid.

    python scripts/region_sweep.py --runset 1,2 --step 0.01 -o region.csv
"""
import argparse
import sys

from rllseq.cli import RunConfig, parse_range, run_sweep
from rllseq.constraints import make_runset, runs_range


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--runset", default="1,2")
    ap.add_argument("--step", default="0.02")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("-o", "--output")
    args = ap.parse_args(argv)

    L = make_runset(args.runset)
    lo, hi = runs_range(L)
    grid = {
        "omega": parse_range(f"0:1:{args.step}"),
        "rho": parse_range(f"{lo}:{hi}:{args.step}"),
    }
    cfg = RunConfig("capacity", args.runset, grid, "csv", args.output, threads=args.threads)
    text = run_sweep(L, cfg)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    inside = sum(1 for line in text.splitlines()[1:] if ",outside," not in line)
    print(f"{inside} of {len(text.splitlines()) - 1} grid points lie in the region", file=sys.stderr)


if __name__ == "__main__":
    main()
