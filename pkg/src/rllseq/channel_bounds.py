"""Code-size bounds for deletion, sparse-error and timing-error channels.

The bounds are asymptotic relations.  Their formula bodies are evaluated at
finite ``n`` and every report says so in its ``note``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .capacity import binary_entropy, solve_lambda
from .constraints import INF, dk_runset, naturals, power_sums
from .counting import composition_rows, count_total
from .errors import BadParameters, OutOfRange
from .roots import GeometricTail, solve_unit_partition

NOTE = "asymptotic-form evaluation"


@dataclass
class BoundReport:
    formula_id: str
    log2_lower: float
    log2_upper: float
    params: dict
    model: str = "standard"
    log2_exact: float | None = None
    note: str = NOTE
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "formula_id": self.formula_id,
            "log2_lower": self.log2_lower,
            "log2_upper": self.log2_upper,
            "params": self.params,
            "model": self.model,
            "note": self.note,
        }
        if self.log2_exact is not None:
            out["log2_exact"] = self.log2_exact
        out.update(self.extra)
        return out


def deletion_bounds(d: int, k, n: int, t: int) -> BoundReport:
    """Bounds on optimal ``t``-deletion-correcting codes in ``S_L(n)``, ``L = {d+1, ..., k+1}``.

    lower ``S_L(n) / (rho* n)**t``, upper ``lower * lambda**t t! / (1 - lambda**(d+1))**t``.
    For ``t > d`` the bounds hold only when whole runs are never deleted and
    the report's ``model`` is ``"run-preserving"``.  For ``k = inf`` and
    ``t = 1`` the report also carries ``S_L(n) / n * (d + 1/(1 - lambda))``.
    """
    if d < 0 or t < 0 or n < 1:
        raise BadParameters("need d >= 0, t >= 0 and n >= 1")
    if k != INF and k <= d:
        raise BadParameters("need d < k")
    L = dk_runset(d, k)
    lam = solve_lambda(L)
    rho_star = 1.0 / power_sums(L, lam).A1
    total = count_total(L, n)
    if total == 0:
        raise BadParameters(f"no admissible sequences of length {n}")
    log_s = math.log2(total)
    lower = log_s - t * math.log2(rho_star * n)
    # 1 - lambda**(d+1) = sum_{l > d+1} lambda**l > 0, and the factor is >= 1
    factor = t * math.log2(lam) + math.log2(math.factorial(t)) - t * math.log2(1 - lam ** (d + 1))
    upper = lower + factor
    exact = None
    if k == INF and t == 1:
        exact = log_s - math.log2(n) + math.log2(d + 1 / (1 - lam))
    return BoundReport(
        formula_id="deletion",
        log2_lower=lower,
        log2_upper=upper,
        params={"d": d, "k": "inf" if k == INF else k, "n": n, "t": t},
        model="run-preserving" if t > d else "standard",
        log2_exact=exact,
        extra={"lambda": lam, "rho_star": rho_star, "log2_prefactor": factor},
    )


def _noise_lambda(d: int) -> float:
    """Root in (0, 1) of ``x**(d+1) + x - 1 = 0``."""
    return math.exp(solve_unit_partition(GeometricTail(d + 1)))


def volume_breakpoint(d: int) -> float:
    lam = _noise_lambda(d)
    return (1 - lam) / (1 + (1 - lam) * d)


def volume_exponent(d: int, rho: float) -> float:
    """Growth rate of the output ball of a channel flipping at most ``rho n`` bits,
    any two flips at least ``d + 1`` apart.
    """
    if d < 0:
        raise OutOfRange("d must be >= 0")
    if not 0.0 <= rho <= 1.0 / (d + 1):
        raise OutOfRange(f"rho={rho} outside [0, 1/{d + 1}]")
    lam = _noise_lambda(d)
    if rho < (1 - lam) / (1 + (1 - lam) * d):
        return (1 - d * rho) * binary_entropy(rho / (1 - d * rho))
    return -math.log2(lam)


def volume_exponent_finite(d: int, rho: float, n: int) -> float:
    """``(1/n) log2 sum_{t <= rho n} S_{N+d}(n, *, t)`` from exact counts."""
    if not 0.0 <= rho <= 1.0 / (d + 1):
        raise OutOfRange(f"rho={rho} outside [0, 1/{d + 1}]")
    t_max = int(math.floor(rho * n + 1e-9))
    rows = composition_rows(naturals(d), n, t_max)
    # t = 0 has no sequences of positive length; count the error-free pattern once
    total = 1 + sum(2 * rows[t][n] for t in range(1, t_max + 1))
    return math.log2(total) / n


def sphere_packing_rate(d: int, rho: float) -> float:
    """Upper bound ``1 - v_d(rho)`` on the rate of codes correcting a fraction ``rho`` of sparse errors."""
    rate = 1.0 - volume_exponent(d, rho)
    assert rate >= -1e-12, "volume exponent exceeds 1"
    return rate


def packing_density(t: int) -> float:
    # center densities (times w**t) of known Manhattan-metric ball packings
    if t == 1:
        return 0.5
    if t == 2:
        return 0.25
    return 1.0 / (2 * t + 1)


def timing_bounds(q: int, n: int, t: int) -> BoundReport:
    """Bounds on optimal codes in ``{0..q-1}**n`` correcting ``t`` particle shifts.

    lower ``q**n / n**t * 2**t c(t) / (q-1)**t``,
    upper ``q**n / n**t * q**(2t) t! / (2**t (q-1)**(2t))``.
    """
    if q < 2 or t < 1 or n < 1:
        raise BadParameters("need q >= 2, t >= 1 and n >= 1")
    base = n * math.log2(q) - t * math.log2(n)
    lower = base + t + math.log2(packing_density(t)) - t * math.log2(q - 1)
    upper = base + 2 * t * math.log2(q) + math.log2(math.factorial(t)) - t - 2 * t * math.log2(q - 1)
    return BoundReport(
        formula_id="timing",
        log2_lower=lower,
        log2_upper=upper,
        params={"q": q, "n": n, "t": t},
        extra={"c_t": packing_density(t)},
    )


def volume_report(d: int, rho: float) -> dict:
    return {
        "formula_id": "volume",
        "params": {"d": d, "rho": rho},
        "volume_exponent": volume_exponent(d, rho),
        "breakpoint": volume_breakpoint(d),
        "note": NOTE,
    }


def sphere_report(d: int, rho: float) -> dict:
    return {
        "formula_id": "sphere",
        "params": {"d": d, "rho": rho},
        "rate_upper": sphere_packing_rate(d, rho),
        "note": NOTE,
    }
