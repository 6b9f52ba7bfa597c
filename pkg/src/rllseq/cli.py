"""Command-line front end: ``rllseq {count,capacity,typical,validate,bounds}``.

Exit status is 0 on success, 1 when a computation fails and 2 for bad
arguments (including invalid run-length sets).
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import asymptotics, capacity, channel_bounds, counting, typicality
from .constraints import INF, RunSet, make_runset
from .errors import ConvergenceFailure, RLLError, SamplerStuck

LN2 = math.log(2.0)
COMPUTATION_ERRORS = (ConvergenceFailure, SamplerStuck, ArithmeticError, RuntimeError)

IDENTITY_SETS = ("interval:1:inf", "1,2", "2,3", "1,3", "interval:2:5")


@dataclass
class RunConfig:
    command: str
    runset: str | None = None
    grid: dict[str, list[float]] = field(default_factory=dict)
    fmt: str = "json"
    output: str | None = None
    seed: int = 0
    nats: bool = False
    threads: int = 1

    def __post_init__(self):
        for name, values in self.grid.items():
            if not values:
                raise ValueError(f"empty grid for {name}")


def dump_json(obj) -> str:
    """Deterministic JSON; parsing and re-dumping gives the same bytes."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False)


def parse_range(text: str) -> list[float]:
    """``a:b:step`` (inclusive of ``b`` when it lies on the grid) or a comma list."""
    if ":" not in text:
        return [float(v) for v in text.split(",") if v.strip()]
    a, b, step = (Fraction(v) for v in text.split(":"))
    if step <= 0:
        raise ValueError("step must be positive")
    count = int((b - a) / step) + 1
    if count < 1:
        raise ValueError(f"empty range {text!r}")
    return [float(a + i * step) for i in range(count)]


def parse_sweep(items: list[str]) -> dict[str, list[float]]:
    grid = {}
    for item in items:
        name, _, spec = item.partition("=")
        if name not in ("omega", "rho") or not spec:
            raise ValueError(f"bad sweep item {item!r}; use omega=a:b:s rho=a:b:s")
        grid[name] = parse_range(spec)
    if set(grid) != {"omega", "rho"}:
        raise ValueError("sweep needs both omega and rho")
    return grid


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("CSL_THREADS", "1")))
    except ValueError:
        return 1


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


# ---------------------------------------------------------------------------
# commands


def cmd_count(args) -> int:
    L = make_runset(args.runset)
    n = args.n
    if args.census:
        census = counting.census(L, n) if n <= counting.RECURRENCE_MAX else counting.census_fast(L, n)
        text = census.to_csv() if args.format == "csv" else dump_json(census.to_json())
        _emit(text, args.output)
        return 0
    if args.w is not None and args.r is not None:
        value = counting.count_wr_fast(L, n, args.w, args.r)
    elif args.w is not None:
        value = counting.count_weight_marginal(L, n, args.w)
    elif args.r is not None:
        value = counting.count_runs_marginal(L, n, args.r)
    else:
        value = counting.count_total(L, n)
    if args.format == "json":
        payload = {"runset": L.to_json(), "n": n, "w": args.w, "r": args.r, "count": str(value)}
        _emit(dump_json({k: v for k, v in payload.items() if v is not None}), args.output)
    else:
        _emit(str(value), args.output)
    return 0


def _capacity_point(L: RunSet, omega, rho, L1: RunSet | None = None) -> capacity.CapacityResult:
    if L1 is not None:
        return capacity.capacity_two_sets(L, L1, (omega, rho))
    if omega is not None and rho is not None:
        return capacity.capacity_wr(L, (omega, rho))
    if omega is not None:
        return capacity.capacity_w(L, omega)
    if rho is not None:
        return capacity.capacity_r(L, rho)
    return capacity.capacity_total(L)


def _fmt(x) -> str:
    if x is None:
        return ""
    if x == -INF:
        return "-inf"
    return repr(float(x))


CSV_HEADER = ["omega", "rho", "region", "sigma", "alpha", "beta", "log_term_coefficient"]


def _csv_row(omega, rho, res: capacity.CapacityResult, nats: bool) -> list[str]:
    sigma = res.sigma * LN2 if nats else res.sigma
    return [_fmt(omega), _fmt(rho), res.region.value, _fmt(sigma),
            _fmt(res.alpha), _fmt(res.beta), repr(res.log_term_coefficient)]


def _sweep_row(job):
    L, omega, rho, nats = job
    return _csv_row(omega, rho, capacity.capacity_wr(L, (omega, rho)), nats)


def _csv(rows) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(CSV_HEADER)
    wr.writerows(rows)
    return buf.getvalue()


def run_sweep(L: RunSet, cfg: RunConfig) -> str:
    jobs = [(L, w, r, cfg.nats) for w, r in itertools.product(cfg.grid["omega"], cfg.grid["rho"])]
    if cfg.threads > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as ex:
            rows = list(ex.map(_sweep_row, jobs, chunksize=64))
    else:
        rows = [_sweep_row(job) for job in jobs]
    # product order is already sorted by (omega, rho)
    return _csv(rows)


def cmd_capacity(args) -> int:
    L = make_runset(args.runset)
    if args.sweep:
        cfg = RunConfig("capacity", args.runset, parse_sweep(args.sweep), "csv", args.output,
                        nats=args.nats, threads=_threads())
        _emit(run_sweep(L, cfg), cfg.output)
        return 0
    L1 = make_runset(args.runset1) if args.runset1 else None
    res = _capacity_point(L, args.omega, args.rho, L1)
    payload = res.to_json(nats=args.nats)
    payload["units"] = "nats" if args.nats else "bits"
    if args.format == "csv":
        _emit(_csv([_csv_row(args.omega, args.rho, res, args.nats)]), args.output)
    else:
        _emit(dump_json(payload), args.output)
    return 0


def cmd_typical(args) -> int:
    L = make_runset(args.runset)
    prof = typicality.typical_profile(L)
    payload = prof.to_json()
    if args.n is not None:
        sample = typicality.sample_sequences(L, args.n, args.count, args.seed)
        stat, dof, p = typicality.chi_square_gof(sample, prof.run_dist)
        payload["sample"] = sample.to_json()
        payload["sample"]["chi_square"] = {"statistic": stat, "dof": dof, "p_value": p}
        if args.histogram:
            with open(args.histogram, "w", newline="") as fh:
                fh.write(typicality.histogram_csv(sample, prof.run_dist))
    if args.window_n is not None:
        payload["concentration_mass"] = typicality.concentration_mass(L, args.window_n)
    _emit(dump_json(payload), args.output)
    return 0


def _all_small_runsets(top: int = 5):
    for size in range(2, top + 1):
        for combo in itertools.combinations(range(1, top + 1), size):
            if math.gcd(*combo) == 1:
                yield make_runset(combo)


def suite_oracle(nmax: int) -> tuple[int, list[dict]]:
    checked, failures = 0, []
    for L in _all_small_runsets():
        for n in range(nmax + 1):
            checked += 1
            if counting.census(L, n) != counting.oracle_census(L, n):
                failures.append({"check": "oracle", "runset": str(L), "n": n})
    return checked, failures


def suite_identities(nmax: int) -> tuple[int, list[dict]]:
    checked, failures = 0, []
    for spec in IDENTITY_SETS:
        L = make_runset(spec)
        for n in range(1, nmax + 1):
            cen = counting.census(L, n)
            checked += 1
            bad = [
                name
                for name, ok in (
                    ("total", cen.total == counting.count_total(L, n)),
                    ("fast", cen == counting.census_fast(L, n)),
                    ("symmetry", all(cen[n - w, r] == c for (w, r), c in cen.table.items())),
                    ("runs", all(cen.runs_marginal(r) == 2 * counting.compositions(L, n, r) for r in range(1, n + 1))),
                )
                if not ok
            ]
            failures.extend({"check": name, "runset": spec, "n": n} for name in bad)
    return checked, failures


FIT_CASES = (
    ("interval:1:inf", ("wr", Fraction(1, 2), Fraction(1, 2)), (-1.25, -0.75)),
    ("interval:1:inf", ("w", Fraction(1, 2)), (-0.75, -0.25)),
    ("interval:1:inf", ("r", Fraction(1, 2)), (-0.75, -0.25)),
    ("1,2", ("wr", Fraction(1, 2), Fraction(3, 4)), (-1.25, -0.75)),
    ("1,2", ("w", Fraction(1, 2)), (-0.75, -0.25)),
    ("1,2", ("r", Fraction(18, 25)), (-0.75, -0.25)),
)


def suite_fit(nmax: int) -> tuple[int, list[dict]]:
    n_list = [100, 200, 400, 800]
    checked, failures = 0, []
    for spec, target, (lo, hi) in FIT_CASES:
        rep = asymptotics.fit_log_correction(make_runset(spec), target, n_list)
        checked += 1
        if not lo <= rep.fitted_log_coefficient <= hi:
            failures.append({"check": "fit", "runset": spec, "target": rep.target,
                             "coefficient": rep.fitted_log_coefficient})
    return checked, failures


SUITES = {"oracle": suite_oracle, "identities": suite_identities, "fit": suite_fit}


def cmd_validate(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    checked, failures = 0, []
    for name in names:
        c, f = SUITES[name](args.nmax)
        checked += c
        failures += f
    _emit(dump_json({"suite": args.suite, "nmax": args.nmax, "checked": checked, "failures": failures}), args.output)
    return 1 if failures else 0


def _k(text: str):
    return INF if text.lower() in ("inf", "infinity") else int(text)


def cmd_bounds(args) -> int:
    if args.kind == "deletion":
        payload = channel_bounds.deletion_bounds(args.d, args.k, args.n, args.t).to_json()
    elif args.kind == "timing":
        payload = channel_bounds.timing_bounds(args.q, args.n, args.t).to_json()
    elif args.kind == "volume":
        payload = channel_bounds.volume_report(args.d, args.rho)
    else:
        payload = channel_bounds.sphere_report(args.d, args.rho)
    _emit(dump_json(payload), args.output)
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rllseq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt=True):
        p.add_argument("--output", "-o", help="write to this file instead of stdout")
        if fmt:
            p.add_argument("--format", choices=("json", "csv"), default=None)

    p = sub.add_parser("count", help="exact counts")
    p.add_argument("--runset", required=True, help="'1,2,5' or 'interval:lo:hi' (hi may be inf)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--w", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--census", action="store_true", help="emit the full (w, r) table")
    common(p)
    p.set_defaults(func=cmd_count, default_format="plain")

    p = sub.add_parser("capacity", help="capacity functions")
    p.add_argument("--runset", required=True)
    p.add_argument("--runset1", help="separate run-length set for runs of ones")
    p.add_argument("--omega", type=float)
    p.add_argument("--rho", type=float)
    p.add_argument("--sweep", nargs=2, metavar="NAME=A:B:STEP")
    p.add_argument("--nats", action="store_true", help="report sigma in nats")
    common(p)
    p.set_defaults(func=cmd_capacity, default_format="json")

    p = sub.add_parser("typical", help="typical parameters and sampling")
    p.add_argument("--runset", required=True)
    p.add_argument("--n", type=int, help="sample sequences of this length")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--histogram", help="CSV path for the sampled run-length histogram")
    p.add_argument("--window-n", type=int, help="also report the exact concentration mass at this n")
    common(p, fmt=False)
    p.set_defaults(func=cmd_typical, default_format="json")

    p = sub.add_parser("validate", help="run an invariant suite")
    p.add_argument("--suite", choices=("oracle", "identities", "fit", "all"), default="all")
    p.add_argument("--nmax", type=int, default=14)
    common(p, fmt=False)
    p.set_defaults(func=cmd_validate, default_format="json")

    p = sub.add_parser("bounds", help="code-size bounds")
    p.add_argument("kind", choices=("deletion", "timing", "volume", "sphere"))
    p.add_argument("--d", type=int, default=0)
    p.add_argument("--k", type=_k, default=INF)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--rho", type=float, default=0.0)
    common(p, fmt=False)
    p.set_defaults(func=cmd_bounds, default_format="json")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "format", None) is None:
        args.format = args.default_format
    try:
        return args.func(args)
    except COMPUTATION_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (RLLError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
