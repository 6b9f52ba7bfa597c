"""Typical weight, run count and run-length statistics of RLL ensembles.

The typical point of ``S_L(n)`` is ``(1/2, rho*)`` with ``rho* = 1 / A1(lambda)``;
runs of length ``l`` appear with frequency ``lambda**l * rho*`` per symbol.
"""
from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import stats

from .capacity import RunDistribution, capacity_total
from .constraints import RunSet, power_sums
from .counting import census_fast, count_total
from .errors import SamplerStuck

#: Cap on the run lengths listed when exporting an infinite set.
EXPORT_MAX_LEN = 30
MAX_REJECTIONS = 10**6


@dataclass(frozen=True)
class TypicalProfile:
    runset: RunSet
    lam: float
    rho_star: float
    run_dist: RunDistribution
    omega_star: float = 0.5

    def beta_star(self, ell: int) -> float:
        """Typical number of runs of length ``ell`` per symbol."""
        if ell not in self.runset:
            return 0.0
        return self.lam**ell * self.rho_star

    def pair_freq(self, ell: int, ell2: int) -> float:
        """Typical frequency of a run of length ``ell`` followed by one of length ``ell2``."""
        if ell not in self.runset or ell2 not in self.runset:
            return 0.0
        return self.lam ** (ell + ell2) * self.rho_star

    def tail_run_freq(self, ell_min: int) -> float:
        """Typical frequency of zero-runs of length at least ``ell_min``."""
        L = self.runset
        if L.is_infinite:
            m = max(ell_min, L.lmin)
            tail = self.lam**m / (1 - self.lam)
        else:
            tail = sum(self.lam**ell for ell in L.upto(int(L.lmax)) if ell >= ell_min)
        return 0.5 * tail * self.rho_star

    def lengths(self, cap: int = EXPORT_MAX_LEN) -> list[int]:
        return self.runset.upto(cap)

    def to_json(self, cap: int = EXPORT_MAX_LEN) -> dict:
        return {
            "runset": self.runset.to_json(),
            "lambda": self.lam,
            "omega_star": self.omega_star,
            "rho_star": self.rho_star,
            "capacity": -math.log2(self.lam),
            "beta_star": {str(ell): self.beta_star(ell) for ell in self.lengths(cap)},
            "run_dist": self.run_dist.to_json(),
        }


def typical_profile(L: RunSet) -> TypicalProfile:
    res = capacity_total(L)
    rho_star = 1.0 / power_sums(L, res.lam).A1
    return TypicalProfile(L, res.lam, rho_star, res.dist0)


def default_window(n: int) -> tuple[float, float]:
    w = n**0.75
    return w, w


def concentration_fraction(L: RunSet, n: int, window: tuple[float, float] | None = None) -> Fraction:
    """Exact share of ``S_L(n)`` with ``|w - n/2| + |r - rho* n| <= dw + dr``."""
    dw, dr = default_window(n) if window is None else window
    total = count_total(L, n)
    if total == 0:
        return Fraction(0)
    rho_star = typical_profile(L).rho_star
    radius = dw + dr
    inside = 0
    for (w, r), c in census_fast(L, n).table.items():
        if abs(w - 0.5 * n) + abs(r - rho_star * n) <= radius:
            inside += c
    return Fraction(inside, total)


def concentration_mass(L: RunSet, n: int, window: tuple[float, float] | None = None) -> float:
    """:func:`concentration_fraction` as a float; the default window is ``n**0.75`` per axis."""
    return float(concentration_fraction(L, n, window))


# ---------------------------------------------------------------------------
# sampling


@dataclass
class SampleStats:
    n: int
    count: int
    seed: int
    weight_sum: int = 0
    runs_sum: int = 0
    # complete runs only; the truncated last run of each sequence is not counted
    run_hist: Counter = field(default_factory=Counter)
    rejections: int = 0

    @property
    def omega_hat(self) -> float:
        return self.weight_sum / (self.n * self.count)

    @property
    def rho_hat(self) -> float:
        return self.runs_sum / (self.n * self.count)

    @property
    def runs_counted(self) -> int:
        return sum(self.run_hist.values())

    def beta_hat(self, ell: int) -> float:
        """Runs of length ``ell`` per symbol, averaged over the samples."""
        return self.run_hist.get(ell, 0) / (self.n * self.count)

    def beta_hat_stderr(self, ell: int, per_sample: list[int] | None = None) -> float:
        # Poisson approximation when per-sample counts are not kept
        return math.sqrt(self.run_hist.get(ell, 0)) / (self.n * self.count)

    def to_json(self, cap: int = EXPORT_MAX_LEN) -> dict:
        lengths = sorted(ell for ell in self.run_hist if ell <= cap)
        return {
            "n": self.n,
            "count": self.count,
            "seed": self.seed,
            "omega_hat": self.omega_hat,
            "rho_hat": self.rho_hat,
            "rejections": self.rejections,
            "beta_hat": {str(ell): self.beta_hat(ell) for ell in lengths},
        }


class _RunDrawer:
    def __init__(self, L: RunSet, lam: float, rng: np.random.Generator):
        self.L = L
        self.lam = lam
        self.rng = rng
        if not L.is_infinite:
            self.values = np.array(L.upto(int(L.lmax)))
            p = lam ** self.values.astype(float)
            self.p = p / p.sum()

    def draw(self, size: int) -> np.ndarray:
        if self.L.is_infinite:
            # lambda**l on {a, a+1, ...} is a shifted geometric law
            return self.L.lmin - 1 + self.rng.geometric(1 - self.lam, size)
        return self.rng.choice(self.values, size=size, p=self.p)


def _one_sequence(drawer: _RunDrawer, n: int, batch: int) -> np.ndarray | None:
    """Run lengths of one sequence of length ``n``, or None if the last run is invalid."""
    runs = drawer.draw(batch)
    ends = np.cumsum(runs)
    while ends[-1] < n:
        more = drawer.draw(batch)
        runs = np.concatenate([runs, more])
        ends = np.concatenate([ends, ends[-1] + np.cumsum(more)])
    k = int(np.searchsorted(ends, n))  # first index with ends[k] >= n
    runs = runs[: k + 1].copy()
    runs[k] -= ends[k] - n
    if int(runs[k]) not in drawer.L:
        return None
    return runs


def sample_sequences(L: RunSet, n: int, count: int, seed: int = 0) -> SampleStats:
    """Draw ``count`` sequences of length ``n`` from the maxentropic run law.

    Runs are i.i.d. with ``P(l) = lambda**l`` and alternate symbols starting
    from a uniform bit.  The last run is cut to reach length ``n``; if the cut
    length is not allowed the sequence is redrawn.
    """
    if count < 1 or n < 1:
        raise ValueError("need n >= 1 and count >= 1")
    prof = typical_profile(L)
    rng = np.random.Generator(np.random.PCG64(seed))
    drawer = _RunDrawer(L, prof.lam, rng)
    batch = int(1.2 * n * prof.rho_star) + 16
    out = SampleStats(n, count, seed)
    for _ in range(count):
        while True:
            runs = _one_sequence(drawer, n, batch)
            if runs is not None:
                break
            out.rejections += 1
            if out.rejections >= MAX_REJECTIONS:
                raise SamplerStuck(f"{out.rejections} rejections for n={n}, L={L}")
        first = int(rng.integers(2))
        ones = runs[1 - first :: 2]
        out.weight_sum += int(ones.sum())
        out.runs_sum += len(runs)
        vals, cnts = np.unique(runs[:-1], return_counts=True)
        out.run_hist.update(dict(zip(vals.tolist(), cnts.tolist())))
    return out


def chi_square_gof(sample: SampleStats, dist: RunDistribution, min_expected: float = 5.0):
    """Chi-square test of the run-length histogram against ``dist``.

    Bins are run lengths in increasing order; the tail from the first bin with
    expected count below ``min_expected`` is pooled.  Returns
    ``(statistic, dof, p_value)``.
    """
    total = sample.runs_counted
    L = dist.support
    top = max(sample.run_hist) if sample.run_hist else L.lmin
    observed, expected = [], []
    mass = 0.0
    for ell in L.upto(int(min(top, L.lmax))):
        e = total * dist.pmf(ell)
        if e < min_expected:
            break
        observed.append(sample.run_hist.get(ell, 0))
        expected.append(e)
        mass += dist.pmf(ell)
    observed.append(total - sum(observed))
    expected.append(total * max(1.0 - mass, 0.0))
    if expected[-1] < min_expected:
        observed[-2] += observed.pop()
        expected[-2] += expected.pop()
    statistic = sum((o - e) ** 2 / e for o, e in zip(observed, expected))
    dof = len(observed) - 1
    return statistic, dof, float(stats.chi2.sf(statistic, dof))


def histogram_csv(sample: SampleStats, dist: RunDistribution, cap: int = EXPORT_MAX_LEN) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["ell", "expected", "observed"])
    total = sample.runs_counted
    for ell in dist.support.upto(cap):
        wr.writerow([ell, repr(total * dist.pmf(ell)), sample.run_hist.get(ell, 0)])
    return buf.getvalue()
