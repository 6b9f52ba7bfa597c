"""Capacity functions of runlength-limited and related constrained sequences.

All capacities are in bits per symbol.  Each function returns a
:class:`CapacityResult` carrying the roots of its characteristic equations,
the coefficient of ``log n`` in the second-order expansion, and the
maxentropic run-length distributions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .constraints import (
    EDGE_TOL,
    INF,
    RegionLocation,
    RunSet,
    classify,
    near_corner,
    runs_range,
    runs_range_at,
    weight_range,
    _unpack,
)
from .errors import CapacityOutOfRange, ConvergenceFailure, OutOfRange
from .roots import FiniteFamily, family, newton_bracketed, solve_mean, solve_unit_partition

LN2 = math.log(2.0)
Region = RegionLocation


def binary_entropy(p: float) -> float:
    """``H(p)`` in bits, with ``H(0) = H(1) = 0``."""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -(p * math.log2(p) + (1 - p) * math.log2(1 - p))


@dataclass(frozen=True)
class RunDistribution:
    """Maxentropic run-length law ``P(l) = normalizer * base**l`` on ``support``.

    Stored through ``log_base = ln(base)`` and ``log_partition = ln sum base**l``
    to stay finite for extreme tilts.  A degenerate law is a point mass at
    ``atom`` with zero entropy.
    """

    support: RunSet
    mean: float
    log_base: Optional[float] = None
    log_partition: Optional[float] = None
    atom: Optional[int] = None

    @property
    def base(self) -> Optional[float]:
        return None if self.log_base is None else math.exp(self.log_base)

    @property
    def normalizer(self) -> Optional[float]:
        return None if self.log_partition is None else math.exp(-self.log_partition)

    def pmf(self, ell: int) -> float:
        if ell not in self.support:
            return 0.0
        if self.atom is not None:
            return float(ell == self.atom)
        return math.exp(ell * self.log_base - self.log_partition)

    def entropy(self) -> float:
        """Entropy in bits (closed form ``log A(x) - mean * log x``)."""
        if self.atom is not None:
            return 0.0
        return (self.log_partition - self.mean * self.log_base) / LN2

    def to_json(self) -> dict:
        if self.atom is not None:
            return {"atom": self.atom, "mean": self.mean}
        return {"base": self.base, "normalizer": self.normalizer, "mean": self.mean}


def _tilted(L: RunSet, mean: float) -> RunDistribution:
    fam = family(L)
    t = solve_mean(fam, mean)
    log_z = fam.stats(t)[0]
    return RunDistribution(L, mean, log_base=t, log_partition=log_z)


def _atom(L: RunSet, ell) -> RunDistribution:
    return RunDistribution(L, float(ell), atom=int(ell))


@dataclass(frozen=True)
class CapacityResult:
    sigma: float
    region: RegionLocation
    log_term_coefficient: float
    alpha: Optional[float] = None
    beta: Optional[float] = None
    lam: Optional[float] = None
    gamma: Optional[float] = None
    dist0: Optional[RunDistribution] = None
    dist1: Optional[RunDistribution] = None
    near_corner: bool = False

    @property
    def is_outside(self) -> bool:
        return self.region is RegionLocation.OUTSIDE

    def to_json(self, *, nats: bool = False) -> dict:
        scale = LN2 if nats else 1.0
        out: dict = {
            # outside the region sigma is -inf, which JSON cannot carry as a number
            "sigma": "-inf" if self.sigma == -INF else self.sigma * scale,
            "region": self.region.value,
            "log_term_coefficient": self.log_term_coefficient,
        }
        for key, val in (("alpha", self.alpha), ("beta", self.beta), ("lambda", self.lam), ("gamma", self.gamma)):
            if val is not None:
                out[key] = val
        if self.dist0 is not None:
            out["dist0"] = self.dist0.to_json()
        if self.dist1 is not None:
            out["dist1"] = self.dist1.to_json()
        if self.near_corner:
            out["near_corner"] = True
        return out


# ---------------------------------------------------------------------------
# unconstrained capacity


def solve_lambda(L: RunSet) -> float:
    """Unique root in (0, 1) of ``sum_{l in L} x**l = 1``."""
    return math.exp(solve_unit_partition(family(L)))


def capacity_total(L: RunSet) -> CapacityResult:
    """``sigma_L(*, *) = -log lambda`` with ``P*(l) = lambda**l``."""
    t = solve_unit_partition(family(L))
    mean = family(L).stats(t)[1]
    dist = RunDistribution(L, mean, log_base=t, log_partition=0.0)
    return CapacityResult(
        sigma=-t / LN2,
        region=Region.INTERIOR,
        log_term_coefficient=0.0,
        lam=math.exp(t),
        dist0=dist,
        dist1=dist,
    )


# ---------------------------------------------------------------------------
# weight and runs both fixed


def _interior(L0: RunSet, L1: RunSet, omega: float, rho: float) -> CapacityResult:
    d0 = _tilted(L0, 2 * (1 - omega) / rho)
    d1 = _tilted(L1, 2 * omega / rho)
    log_ab = d0.log_partition + d1.log_partition
    sigma = (-(1 - omega) * d0.log_base - omega * d1.log_base + 0.5 * rho * log_ab) / LN2
    return CapacityResult(
        sigma=sigma,
        region=Region.INTERIOR,
        log_term_coefficient=-1.0,
        alpha=d0.base,
        beta=d1.base,
        gamma=math.exp(-0.5 * log_ab),
        dist0=d0,
        dist1=d1,
    )


def _edge(L: RunSet, omega: float, region: RegionLocation) -> CapacityResult:
    a, b = L.lmin, L.lmax
    # on each edge one run type is pinned to a single length; the other is tilted
    if region is Region.EDGE_UPPER_LEFT:
        tilted = _tilted(L, (1 - omega) / omega * a)
        share, pinned_len, ones_pinned = 1 - omega, a, True
    elif region is Region.EDGE_UPPER_RIGHT:
        tilted = _tilted(L, omega / (1 - omega) * a)
        share, pinned_len, ones_pinned = omega, a, False
    elif region is Region.EDGE_LOWER_LEFT:
        tilted = _tilted(L, omega / (1 - omega) * b)
        share, pinned_len, ones_pinned = omega, b, False
    else:
        tilted = _tilted(L, (1 - omega) / omega * b)
        share, pinned_len, ones_pinned = 1 - omega, b, True
    pinned_share = 1 - share
    sigma = (-share * tilted.log_base + pinned_share / pinned_len * tilted.log_partition) / LN2
    pinned = _atom(L, pinned_len)
    d0, d1 = (tilted, pinned) if ones_pinned else (pinned, tilted)
    return CapacityResult(
        sigma=sigma,
        region=region,
        log_term_coefficient=-0.5,
        alpha=tilted.base,
        dist0=d0,
        dist1=d1,
    )


def _corner(L: RunSet, omega: float, rho: float) -> CapacityResult:
    dists = []
    for mean in (2 * (1 - omega) / rho, 2 * omega / rho) if rho > 0 else ():
        if math.isclose(mean, L.lmin, rel_tol=1e-6):
            dists.append(_atom(L, L.lmin))
        elif L.lmax != INF and math.isclose(mean, L.lmax, rel_tol=1e-6):
            dists.append(_atom(L, L.lmax))
        else:
            dists.append(None)
    d0, d1 = dists if dists else (None, None)
    return CapacityResult(0.0, Region.CORNER, 0.0, dist0=d0, dist1=d1, near_corner=True)


def capacity_wr(L: RunSet, p, tol: float = EDGE_TOL) -> CapacityResult:
    """``sigma_L(omega, rho)`` with region dispatch.

    Interior points solve two decoupled mean equations; edges pin one run type
    to a single length; corners give 0; points outside give ``-inf``.
    """
    omega, rho = _unpack(p)
    region = classify(L, (omega, rho), tol)
    if region is Region.OUTSIDE:
        return CapacityResult(-INF, region, 0.0)
    if region is Region.CORNER:
        return _corner(L, omega, rho)
    close = near_corner(L, (omega, rho), tol)
    try:
        if region is Region.INTERIOR:
            res = _interior(L, L, omega, rho)
        else:
            res = _edge(L, omega, region)
    except ConvergenceFailure:
        # a mean pushed onto lmin/lmax by rounding: only possible next to a corner
        if not close:
            raise
        return _corner(L, omega, rho)
    if close:
        res = CapacityResult(**{**res.__dict__, "near_corner": True})
    return res


def capacity_two_sets(L0: RunSet, L1: RunSet, p) -> CapacityResult:
    """Capacity with zero-runs in ``L0`` and one-runs in ``L1`` (interior points only)."""
    omega, rho = _unpack(p)
    lo = max(2 * omega / L1.lmax, 2 * (1 - omega) / L0.lmax)
    hi = min(2 * omega / L1.lmin, 2 * (1 - omega) / L0.lmin)
    if not (0 < omega < 1 and lo < rho < hi):
        raise OutOfRange(f"({omega}, {rho}) is not interior for L0={L0}, L1={L1}")
    return _interior(L0, L1, omega, rho)


# ---------------------------------------------------------------------------
# one constraint


def _rho_star_solve(L: RunSet, omega: float):
    """Maximizer over rho of sigma(omega, rho): root of A(alpha) A(beta) = 1."""
    rlo, rhi = runs_range_at(L, omega)
    fam = family(L)

    def logs(rho):
        m0, m1 = 2 * (1 - omega) / rho, 2 * omega / rho
        if min(m0, m1) <= fam.vmin:
            return None, 1
        if max(m0, m1) >= fam.vmax:
            return None, -1
        t0, t1 = solve_mean(fam, m0), solve_mean(fam, m1)
        return (fam.stats(t0), fam.stats(t1), m0, m1), 0

    def f(rho):  # -ln(A(alpha) A(beta)), increasing in rho
        st, side = logs(rho)
        if st is None:
            return math.inf * side
        return -(st[0][0] + st[1][0])

    def fprime(rho):
        st, _ = logs(rho)
        if st is None:
            return math.nan
        (_, _, v0), (_, _, v1), m0, m1 = st
        return (m0 * m0 / v0 + m1 * m1 / v1) / rho

    rho = newton_bracketed(f, fprime, rlo, rhi, scale=rhi)
    st, _ = logs(rho)
    return rho, st


def rho_star_omega(L: RunSet, omega: float) -> float:
    """The relative run count maximizing ``sigma_L(omega, .)``."""
    lo, hi = weight_range(L)
    if not lo < omega < hi:
        raise OutOfRange(f"omega={omega} not inside ({lo}, {hi})")
    return _rho_star_solve(L, omega)[0]


def capacity_w(L: RunSet, omega: float, tol: float = EDGE_TOL) -> CapacityResult:
    """Constant-weight capacity ``sigma_L(omega, *)``."""
    lo, hi = weight_range(L)
    if omega < lo - tol or omega > hi + tol:
        raise OutOfRange(f"omega={omega} outside [{lo}, {hi}] for {L}")
    if abs(omega - lo) <= tol or abs(omega - hi) <= tol:
        return CapacityResult(0.0, Region.CORNER, 0.0)
    rho, _ = _rho_star_solve(L, omega)
    d0, d1 = _tilted(L, 2 * (1 - omega) / rho), _tilted(L, 2 * omega / rho)
    sigma = (-(1 - omega) * d0.log_base - omega * d1.log_base) / LN2
    return CapacityResult(
        sigma=sigma,
        region=Region.INTERIOR,
        log_term_coefficient=-0.5,
        alpha=d0.base,
        beta=d1.base,
        dist0=d0,
        dist1=d1,
    )


def capacity_r(L: RunSet, rho: float, tol: float = EDGE_TOL) -> CapacityResult:
    """Constant-number-of-runs capacity ``sigma_L(*, rho)``."""
    lo, hi = runs_range(L)
    if rho < lo - tol or rho > hi + tol:
        raise OutOfRange(f"rho={rho} outside [{lo}, {hi}] for {L}")
    if abs(rho - lo) <= tol or abs(rho - hi) <= tol:
        return CapacityResult(0.0, Region.CORNER, 0.0)
    d = _tilted(L, 1.0 / rho)
    sigma = (-d.log_base + rho * d.log_partition) / LN2
    return CapacityResult(sigma, Region.INTERIOR, -0.5, alpha=d.base, dist0=d, dist1=d)


# ---------------------------------------------------------------------------
# sub-block energy constrained and Manhattan-weight sequences


def _sec_family(lb: int, wb: int) -> FiniteFamily:
    js = range(wb, lb + 1)
    return FiniteFamily(list(js), [math.log(math.comb(lb, j)) for j in js])


def sec_optimum(lb: int, wb: int) -> tuple[float, float]:
    """``(omega*, sigma_sec(omega*))`` for blocks of length ``lb`` and weight ``>= wb``."""
    js = range(wb, lb + 1)
    total = sum(math.comb(lb, j) for j in js)
    omega_star = sum(j * math.comb(lb, j) for j in js) / (lb * total)
    return omega_star, math.log2(total) / lb


def capacity_sec(lb: int, wb: int, omega: float, tol: float = EDGE_TOL) -> CapacityResult:
    """Constant-weight capacity of sub-block energy constrained sequences.

    At ``omega = wb/lb`` every block has weight exactly ``wb`` and the value is
    the continuous limit ``log2(C(lb, wb)) / lb``; at ``omega = 1`` it is 0.
    """
    if lb < 1 or not 0 <= wb <= lb:
        raise OutOfRange("need lb >= 1 and 0 <= wb <= lb")
    lo = wb / lb
    if omega < lo - tol or omega > 1 + tol:
        raise OutOfRange(f"omega={omega} outside [{lo}, 1]")
    if abs(omega - 1) <= tol:
        return CapacityResult(0.0, Region.CORNER, 0.0)
    if abs(omega - lo) <= tol:
        return CapacityResult(math.log2(math.comb(lb, wb)) / lb, Region.CORNER, 0.0)
    fam = _sec_family(lb, wb)
    t = solve_mean(fam, omega * lb)
    log_z = fam.stats(t)[0]
    sigma = (-omega * t + log_z / lb) / LN2
    return CapacityResult(sigma, Region.INTERIOR, -0.5, beta=math.exp(t))


def capacity_manhattan(q: int, omega: float, tol: float = EDGE_TOL) -> CapacityResult:
    """``mu_q(omega)``: growth rate of q-ary sequences with Manhattan weight ``omega n``."""
    if q < 2:
        raise OutOfRange("q must be >= 2")
    if omega < -tol or omega > q - 1 + tol:
        raise OutOfRange(f"omega={omega} outside [0, {q - 1}]")
    if abs(omega) <= tol or abs(omega - (q - 1)) <= tol:
        return CapacityResult(0.0, Region.CORNER, 0.0)
    fam = FiniteFamily(list(range(q)))
    t = solve_mean(fam, omega)
    sigma = (-omega * t + fam.stats(t)[0]) / LN2
    return CapacityResult(sigma, Region.INTERIOR, -0.5, alpha=math.exp(t))


# ---------------------------------------------------------------------------


def optimal_distributions(
    L: RunSet,
    *,
    omega: float | None = None,
    rho: float | None = None,
    L1: RunSet | None = None,
) -> tuple[RunDistribution, ...]:
    """Maxentropic run-length laws for the given constraint.

    No constraint gives one law ``lambda**l``; a runs constraint gives one law
    with mean ``1/rho``; a weight constraint, or both, give the pair
    ``(zero-runs, one-runs)``.  Passing ``L1`` uses separate sets for the
    two run types (both parameters required).
    """
    if L1 is not None:
        if omega is None or rho is None:
            raise ValueError("separate run sets need both omega and rho")
        res = capacity_two_sets(L, L1, (omega, rho))
        return res.dist0, res.dist1
    if omega is None and rho is None:
        return (capacity_total(L).dist0,)
    if omega is None:
        res = capacity_r(L, rho)
        if res.dist0 is None:
            raise OutOfRange(f"rho={rho} is an endpoint; the law is degenerate")
        return (res.dist0,)
    if rho is None:
        res = capacity_w(L, omega)
    else:
        res = capacity_wr(L, (omega, rho))
        if res.is_outside:
            raise CapacityOutOfRange(f"({omega}, {rho}) outside the region of {L}")
    if res.dist0 is None or res.dist1 is None:
        raise OutOfRange("degenerate point without well-defined laws")
    return res.dist0, res.dist1
