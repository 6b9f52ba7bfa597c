"""Second-order checks of capacity predictions against exact counts.

``log2 S(n) - n * sigma`` is regressed on ``log2 n`` to recover the
coefficient of the logarithmic correction.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .capacity import capacity_r, capacity_total, capacity_w, capacity_wr
from .constraints import RunSet
from .counting import count_runs_marginal, count_total, count_weight_marginal, count_wr_fast
from .errors import BadParameters, CapacityOutOfRange, EmptySeries, OutOfRange


@dataclass(frozen=True)
class Target:
    """Which count series to fit: ``"wr"``, ``"w"``, ``"r"`` or ``"total"``."""

    kind: str
    omega: Fraction | None = None
    rho: Fraction | None = None

    @classmethod
    def parse(cls, spec) -> "Target":
        if isinstance(spec, Target):
            return spec
        kind, *params = spec
        # floats go through their shortest repr so 0.72 becomes 18/25
        params = [Fraction(str(p)) if isinstance(p, float) else Fraction(p) for p in params]
        if kind == "wr" and len(params) == 2:
            return cls("wr", params[0], params[1])
        if kind == "w" and len(params) == 1:
            return cls("w", omega=params[0])
        if kind == "r" and len(params) == 1:
            return cls("r", rho=params[0])
        if kind == "total" and not params:
            return cls("total")
        raise BadParameters(f"bad target {spec!r}")

    def __str__(self) -> str:
        vals = [str(v) for v in (self.omega, self.rho) if v is not None]
        return f"{self.kind}({','.join(vals)})" if vals else self.kind


@dataclass
class FitReport:
    target: str
    sigma: float
    points: list[tuple[int, float, float]]  # (n, log2 count, n * sigma)
    fitted_log_coefficient: float
    fitted_constant: float
    residuals: list[float]

    @property
    def max_residual(self) -> float:
        return max(abs(r) for r in self.residuals)

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["n", "log_count", "n_term", "residual"])
        for (n, lc, nt), res in zip(self.points, self.residuals):
            wr.writerow([n, repr(lc), repr(nt), repr(res)])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "target": self.target,
            "sigma": self.sigma,
            "fitted_log_coefficient": self.fitted_log_coefficient,
            "fitted_constant": self.fitted_constant,
            "max_residual": self.max_residual,
            "points": [{"n": n, "log_count": lc, "n_term": nt} for n, lc, nt in self.points],
        }


def _sigma_and_counter(L: RunSet, tg: Target):
    try:
        if tg.kind == "wr":
            res = capacity_wr(L, (float(tg.omega), float(tg.rho)))
            if res.is_outside:
                raise CapacityOutOfRange(f"{tg} is outside the region of {L}")
            return res.sigma, lambda n: count_wr_fast(L, n, int(tg.omega * n), int(tg.rho * n))
        if tg.kind == "w":
            res = capacity_w(L, float(tg.omega))
            return res.sigma, lambda n: count_weight_marginal(L, n, int(tg.omega * n))
        if tg.kind == "r":
            res = capacity_r(L, float(tg.rho))
            return res.sigma, lambda n: count_runs_marginal(L, n, int(tg.rho * n))
    except OutOfRange as exc:
        if isinstance(exc, CapacityOutOfRange):
            raise
        raise CapacityOutOfRange(str(exc)) from exc
    return capacity_total(L).sigma, lambda n: count_total(L, n)


def _check_alignment(tg: Target, n_list) -> None:
    for frac in (tg.omega, tg.rho):
        if frac is None:
            continue
        bad = [n for n in n_list if (frac * n).denominator != 1]
        if bad:
            raise BadParameters(f"{frac} * n is not an integer for n in {bad}")


def fit_log_correction(L: RunSet, target, n_list, *, strict: bool = True) -> FitReport:
    """Least-squares fit of ``log2 S(n) - n sigma = c log2 n + b``.

    ``target`` is ``("wr", omega, rho)``, ``("w", omega)``, ``("r", rho)`` or
    ``("total",)`` with rational parameters such that ``omega n`` and
    ``rho n`` are integers for every ``n``.  With ``strict`` the series must
    have at least 4 points spanning a factor of 8 or more.
    """
    n_list = sorted(set(int(n) for n in n_list))
    if not n_list:
        raise EmptySeries("n_list is empty")
    if len(n_list) < 2:
        raise EmptySeries("need at least two lengths to fit two parameters")
    if strict and (len(n_list) < 4 or n_list[-1] < 8 * n_list[0]):
        raise BadParameters("need >= 4 lengths spanning a factor >= 8")
    tg = Target.parse(target)
    _check_alignment(tg, n_list)
    sigma, counter = _sigma_and_counter(L, tg)

    points = []
    for n in n_list:
        c = counter(n)
        if c == 0:
            raise CapacityOutOfRange(f"no admissible sequences for {tg} at n={n}")
        points.append((n, math.log2(c), n * sigma))
    x = np.log2(np.array(n_list, dtype=float))
    y = np.array([lc - nt for _, lc, nt in points])
    design = np.column_stack([x, np.ones_like(x)])
    (coef, const), *_ = np.linalg.lstsq(design, y, rcond=None)
    residuals = (y - coef * x - const).tolist()
    return FitReport(str(tg), sigma, points, float(coef), float(const), residuals)


def convergence_report(L: RunSet, n_list) -> list[tuple[int, float, float]]:
    """``(n, log2(S_L(n)) / n, gap)`` with ``gap = |log2(S_L(n))/n - capacity|``."""
    n_list = sorted(set(int(n) for n in n_list))
    if not n_list:
        raise EmptySeries("n_list is empty")
    cap = capacity_total(L).sigma
    rows = []
    for n in n_list:
        c = count_total(L, n)
        rate = math.log2(c) / n if c else -math.inf
        rows.append((n, rate, abs(rate - cap)))
    return rows


def max_scaled_gap(rows) -> float:
    """``max gap * n`` over a :func:`convergence_report`."""
    return max(n * gap for n, _, gap in rows)
