"""Exact tail mass outside a window around the typical point, as n doubles."""
import argparse

from rllseq.constraints import make_runset
from rllseq.typicality import concentration_mass, typical_profile


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--runsets", nargs="+", default=["interval:1:inf", "1,2", "1,2,3"])
    ap.add_argument("--n", type=int, nargs="+", default=[64, 128, 256, 512])
    ap.add_argument("--frac", type=float, default=0.05, help="window half-width as a fraction of n")
    args = ap.parse_args(argv)

    for spec in args.runsets:
        L = make_runset(spec)
        prof = typical_profile(L)
        print(f"{spec}: rho* = {prof.rho_star:.6f}")
        prev = None
        for n in args.n:
            tail = 1 - concentration_mass(L, n, (args.frac * n, args.frac * n))
            ratio = "" if prev is None or tail == 0 else f"  ratio {prev / tail:.3f}"
            print(f"  n={n:5d}  tail={tail:.6e}{ratio}")
            prev = tail


if __name__ == "__main__":
    main()
