"""Monotone one-dimensional root finding and exponentially tilted families.

Every characteristic equation in the package has the form "mean of a tilted
distribution equals c" or "partition function equals 1".  Both are solved in
the log variable ``t = ln x`` where the mean is increasing (its derivative is
the variance), so a bracketed Newton iteration always converges.
"""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .constraints import RunSet
from .errors import ConvergenceFailure

RTOL = 1e-13
MAXITER = 200


def newton_bracketed(
    f: Callable[[float], float],
    fprime: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    x0: float | None = None,
    rtol: float = RTOL,
    scale: float = 1.0,
    maxiter: int = MAXITER,
) -> float:
    """Root of an increasing ``f`` with ``f(lo) < 0 < f(hi)``.

    Newton steps that leave the current bracket are replaced by bisection.
    Stops when a step is below ``rtol * max(|x|, scale)``.
    """
    x = 0.5 * (lo + hi) if x0 is None else x0
    for _ in range(maxiter):
        fx = f(x)
        if fx == 0.0:
            return x
        if fx < 0:
            lo = x
        else:
            hi = x
        d = fprime(x)
        xn = x - fx / d if d > 0 and math.isfinite(d) else math.nan
        if not lo < xn < hi:
            xn = 0.5 * (lo + hi)
        if abs(xn - x) <= rtol * max(abs(xn), scale):
            return xn
        x = xn
    raise ConvergenceFailure(f"no convergence in {maxiter} iterations (bracket [{lo}, {hi}])")


class FiniteFamily:
    """Weights ``w_v x^v`` over a finite integer support."""

    def __init__(self, values, log_weights=None):
        self.values = np.asarray(values, dtype=float)
        self.log_weights = (
            np.zeros_like(self.values) if log_weights is None else np.asarray(log_weights, dtype=float)
        )
        self.vmin = float(self.values.min())
        self.vmax = float(self.values.max())
        self.t_max = math.inf

    def stats(self, t: float) -> tuple[float, float, float]:
        """``(ln Z, mean, variance)`` at ``x = e^t``."""
        s = self.log_weights + self.values * t
        m = s.max()
        p = np.exp(s - m)
        z = float(p.sum())
        mean = float(self.values @ p) / z
        var = float(((self.values - mean) ** 2) @ p) / z
        return float(m) + math.log(z), mean, var


class GeometricTail:
    """Unit weights over ``{a, a+1, ...}``; defined for ``t < 0``."""

    def __init__(self, a: int):
        self.a = a
        self.vmin = float(a)
        self.vmax = math.inf
        self.t_max = 0.0

    def stats(self, t: float) -> tuple[float, float, float]:
        q = -math.expm1(t)  # 1 - x
        x = math.exp(t)
        return self.a * t - math.log(q), self.a + x / q, x / (q * q)


def family(L: RunSet):
    if L.is_infinite:
        return GeometricTail(L.lmin)
    return FiniteFamily(L.upto(int(L.lmax)))


def _bracket_mean(fam, c: float) -> tuple[float, float]:
    lo = -1.0
    while fam.stats(lo)[1] >= c:
        lo *= 2.0
        if lo < -1e7:
            raise ConvergenceFailure(f"cannot bracket mean {c} from below")
    if fam.t_max == 0.0:
        hi = -1.0
        while fam.stats(hi)[1] <= c:
            hi *= 0.5
            if hi > -1e-300:
                raise ConvergenceFailure(f"cannot bracket mean {c} from above")
    else:
        hi = 1.0
        while fam.stats(hi)[1] <= c:
            hi *= 2.0
            if hi > 1e7:
                raise ConvergenceFailure(f"cannot bracket mean {c} from above")
    return lo, hi


def solve_mean(fam, c: float) -> float:
    """Log-tilt ``t`` at which the tilted mean equals ``c`` (``vmin < c < vmax``)."""
    if not fam.vmin < c < fam.vmax:
        raise ConvergenceFailure(f"mean {c} is not strictly inside ({fam.vmin}, {fam.vmax})")
    lo, hi = _bracket_mean(fam, c)
    return newton_bracketed(
        lambda t: fam.stats(t)[1] - c,
        lambda t: fam.stats(t)[2],
        lo,
        hi,
    )


def solve_unit_partition(fam) -> float:
    """Log-tilt ``t < 0`` at which the partition function equals 1."""
    lo = -1.0
    while fam.stats(lo)[0] >= 0:
        lo *= 2.0
        if lo < -1e7:
            raise ConvergenceFailure("cannot bracket unit partition root")
    if fam.t_max == 0.0:
        hi = -1.0
        while fam.stats(hi)[0] <= 0:
            hi *= 0.5
            if hi > -1e-300:
                raise ConvergenceFailure("cannot bracket unit partition root")
    else:
        hi = 1.0
        while fam.stats(hi)[0] <= 0:
            hi *= 2.0
            if hi > 1e7:
                raise ConvergenceFailure("cannot bracket unit partition root")
    return newton_bracketed(
        lambda t: fam.stats(t)[0],
        lambda t: fam.stats(t)[1],
        lo,
        hi,
    )
