"""Run-length constraint sets and the admissible (weight, runs) region.

A :class:`RunSet` is the set ``L`` of allowed run lengths.  It is either an
explicit finite list or an integer interval whose top may be infinite; the
infinite case is handled with closed-form geometric tails everywhere, never
by truncation.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, NamedTuple

from .errors import DomainError, EmptySet, NonCoprime, NonPositiveElement, SingletonSet

INF = math.inf

#: Default absolute distance used to snap points onto region edges.
EDGE_TOL = 1e-9


@dataclass(frozen=True)
class RunSet:
    """A set of allowed run lengths.

    Use :func:`make_runset` (validating) or :func:`interval` to build one.
    Direct construction only checks the shape, so shifted or one-sided sets
    that are not coprime can still be represented for counting purposes.
    """

    kind: str  # "finite" or "interval"
    elements: tuple[int, ...] = ()
    lo: int = 0
    hi: float = 0  # int, or INF

    def __post_init__(self):
        if self.kind == "finite":
            els = self.elements
            if not els:
                raise EmptySet("run-length set is empty")
            if any(b <= a for a, b in zip(els, els[1:])):
                raise ValueError("elements must be strictly increasing")
            if els[0] < 1:
                raise NonPositiveElement(f"run lengths must be >= 1, got {els[0]}")
        elif self.kind == "interval":
            if self.lo < 1:
                raise NonPositiveElement(f"run lengths must be >= 1, got {self.lo}")
            if self.hi < self.lo:
                raise EmptySet(f"empty interval [{self.lo}, {self.hi}]")
            if self.hi != INF and self.hi != int(self.hi):
                raise ValueError("interval top must be an integer or inf")
        else:
            raise ValueError(f"unknown RunSet kind {self.kind!r}")

    @property
    def lmin(self) -> int:
        return self.elements[0] if self.kind == "finite" else self.lo

    @property
    def lmax(self) -> float:
        return self.elements[-1] if self.kind == "finite" else self.hi

    @property
    def is_infinite(self) -> bool:
        return self.lmax == INF

    @property
    def is_contiguous(self) -> bool:
        if self.kind == "interval":
            return True
        return self.elements[-1] - self.elements[0] + 1 == len(self.elements)

    def size(self) -> float:
        if self.kind == "finite":
            return len(self.elements)
        return self.hi - self.lo + 1

    def __contains__(self, ell) -> bool:
        if self.kind == "finite":
            return ell in self.elements
        return self.lo <= ell <= self.hi

    def upto(self, cap: int) -> list[int]:
        """Elements that are <= cap, increasing."""
        if self.kind == "finite":
            return [e for e in self.elements if e <= cap]
        top = cap if self.hi == INF else min(cap, int(self.hi))
        return list(range(self.lo, top + 1))

    def span(self, cap: int) -> tuple[int, int] | None:
        """``(lo, hi)`` capped at ``cap`` when the set is contiguous, else None."""
        if not self.is_contiguous:
            return None
        hi = self.lmax if self.lmax != INF else cap
        return self.lmin, int(min(hi, cap))

    def shift(self, s: int) -> "RunSet":
        """The translate ``L + s`` (no coprimality check)."""
        if self.kind == "finite":
            return RunSet("finite", tuple(e + s for e in self.elements))
        return RunSet("interval", lo=self.lo + s, hi=self.hi + s if self.hi != INF else INF)

    def to_json(self) -> dict:
        if self.kind == "finite":
            return {"kind": "finite", "elements": list(self.elements)}
        return {"kind": "interval", "lo": self.lo, "hi": "inf" if self.hi == INF else int(self.hi)}

    @classmethod
    def from_json(cls, obj: dict) -> "RunSet":
        if obj["kind"] == "finite":
            return make_runset(obj["elements"])
        hi = obj["hi"]
        return interval(obj["lo"], INF if hi == "inf" else int(hi))

    def __str__(self) -> str:
        if self.kind == "finite":
            return ",".join(map(str, self.elements))
        return f"interval:{self.lo}:{'inf' if self.hi == INF else int(self.hi)}"


def _validate(L: RunSet) -> RunSet:
    if L.size() < 2:
        raise SingletonSet(f"need at least two run lengths, got {L}")
    if L.kind == "finite" and reduce(math.gcd, L.elements) != 1:
        raise NonCoprime(f"gcd of {L} is {reduce(math.gcd, L.elements)}")
    return L


def interval(lo: int, hi: float = INF) -> RunSet:
    """Validated interval ``{lo, ..., hi}``; ``hi`` may be ``math.inf``."""
    return _validate(RunSet("interval", lo=int(lo), hi=INF if hi == INF else int(hi)))


def naturals(d: int = 0) -> RunSet:
    """``N + d = {d+1, d+2, ...}``."""
    return interval(d + 1, INF)


def dk_runset(d: int, k: float) -> RunSet:
    """Run-length set of (d, k)-sequences: ``{d+1, ..., k+1}``."""
    return interval(d + 1, INF if k == INF else k + 1)


def parse_runset(text: str, *, validate: bool = True) -> RunSet:
    """Parse ``"1,2,5"`` or ``"interval:lo:hi"`` (``hi`` may be ``inf``)."""
    text = text.strip()
    if text.startswith("interval:"):
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"bad interval spec {text!r}")
        lo = int(parts[1])
        hi = INF if parts[2].lower() in ("inf", "infinity") else int(parts[2])
        L = RunSet("interval", lo=lo, hi=hi)
    else:
        items = [p for p in text.split(",") if p.strip()]
        if not items:
            raise EmptySet("run-length set is empty")
        L = RunSet("finite", tuple(sorted({int(p) for p in items})))
    return _validate(L) if validate else L


def make_runset(spec, *, validate: bool = True) -> RunSet:
    """Build a RunSet from an iterable of ints, a CLI string, or a JSON dict.

    Raises EmptySet, SingletonSet, NonCoprime or NonPositiveElement.  With
    ``validate=False`` only emptiness and positivity are checked.
    """
    if isinstance(spec, RunSet):
        return _validate(spec) if validate else spec
    if isinstance(spec, str):
        return parse_runset(spec, validate=validate)
    if isinstance(spec, dict):
        return RunSet.from_json(spec)
    if isinstance(spec, range) and spec.step == 1 and len(spec) > 0:
        L = RunSet("interval", lo=spec.start, hi=spec.stop - 1)
        return _validate(L) if validate else L
    els = sorted({int(e) for e in spec})
    if not els:
        raise EmptySet("run-length set is empty")
    L = RunSet("finite", tuple(els))
    return _validate(L) if validate else L


class PowerSums(NamedTuple):
    A: float   # sum x^l
    A1: float  # sum l x^l
    A2: float  # sum l^2 x^l


def power_sums(L: RunSet, x: float) -> PowerSums:
    """Evaluate ``sum x^l``, ``sum l x^l`` and ``sum l^2 x^l`` over ``L``."""
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    if L.is_infinite:
        if x >= 1:
            raise DomainError(f"series over {L} diverges at x={x}")
        a = L.lo
        q = 1.0 - x
        xa = x**a
        A = xa / q
        A1 = xa * (a / q + x / q**2)
        A2 = xa * (a * a / q + 2 * a * x / q**2 + x * (1 + x) / q**3)
        return PowerSums(A, A1, A2)
    A = A1 = A2 = 0.0
    for ell in L.upto(int(L.lmax)):
        term = x**ell
        A += term
        A1 += ell * term
        A2 += ell * ell * term
    return PowerSums(A, A1, A2)


@dataclass(frozen=True)
class ParamPoint:
    omega: float
    rho: float


class RegionLocation(enum.Enum):
    INTERIOR = "interior"
    EDGE_UPPER_LEFT = "edge_ul"    # rho = 2 omega / lmin
    EDGE_UPPER_RIGHT = "edge_ur"   # rho = 2 (1 - omega) / lmin
    EDGE_LOWER_LEFT = "edge_ll"    # rho = 2 (1 - omega) / lmax
    EDGE_LOWER_RIGHT = "edge_lr"   # rho = 2 omega / lmax
    CORNER = "corner"
    OUTSIDE = "outside"

    @property
    def is_edge(self) -> bool:
        return self.value.startswith("edge")


def edge_margins(lmin: float, lmax: float, omega: float, rho: float) -> dict[RegionLocation, float]:
    """Signed slack (in rho units) of each of the four half-planes bounding the region."""
    return {
        RegionLocation.EDGE_UPPER_LEFT: 2 * omega / lmin - rho,
        RegionLocation.EDGE_UPPER_RIGHT: 2 * (1 - omega) / lmin - rho,
        RegionLocation.EDGE_LOWER_LEFT: rho - 2 * (1 - omega) / lmax,
        RegionLocation.EDGE_LOWER_RIGHT: rho - 2 * omega / lmax,
    }


def classify(L: RunSet, p, tol: float = EDGE_TOL) -> RegionLocation:
    """Locate ``p = (omega, rho)`` relative to the admissible region of ``L``.

    A constraint is active when its slack is within ``tol``; one active
    constraint is an edge, two or more a corner.  With ``lmax = inf`` both
    lower edges collapse onto ``rho = 0``, which therefore classifies as a
    corner (the capacity is 0 there).
    """
    omega, rho = _unpack(p)
    if not (0.0 <= omega <= 1.0) or rho < -tol:
        return RegionLocation.OUTSIDE
    margins = edge_margins(L.lmin, L.lmax, omega, rho)
    if any(g < -tol for g in margins.values()):
        return RegionLocation.OUTSIDE
    active = [loc for loc, g in margins.items() if g <= tol]
    if not active:
        return RegionLocation.INTERIOR
    if len(active) == 1:
        return active[0]
    return RegionLocation.CORNER


def corners(L: RunSet) -> list[tuple[float, float]]:
    a, b = L.lmin, L.lmax
    if b == INF:
        return [(0.0, 0.0), (1.0, 0.0), (0.5, 1.0 / a), (0.5, 0.0)]
    return [(a / (a + b), 2 / (a + b)), (b / (a + b), 2 / (a + b)), (0.5, 1.0 / a), (0.5, 1.0 / b)]


def near_corner(L: RunSet, p, tol: float = EDGE_TOL) -> bool:
    omega, rho = _unpack(p)
    if L.is_infinite and rho < 10 * tol:
        return True
    return any(math.hypot(omega - w, rho - r) < 10 * tol for w, r in corners(L))


def weight_range(L: RunSet) -> tuple[float, float]:
    """Closed range of admissible relative weights."""
    a, b = L.lmin, L.lmax
    if b == INF:
        return 0.0, 1.0
    return a / (a + b), b / (a + b)


def runs_range(L: RunSet) -> tuple[float, float]:
    """Closed range of admissible relative run counts."""
    return (0.0 if L.is_infinite else 1.0 / L.lmax), 1.0 / L.lmin


def runs_range_at(L: RunSet, omega: float) -> tuple[float, float]:
    """Range of rho admissible together with weight ``omega``."""
    a, b = L.lmin, L.lmax
    lo = 0.0 if b == INF else 2 * max(omega, 1 - omega) / b
    return lo, 2 * min(omega, 1 - omega) / a


def _unpack(p) -> tuple[float, float]:
    if isinstance(p, ParamPoint):
        return float(p.omega), float(p.rho)
    omega, rho = p
    return float(omega), float(rho)
