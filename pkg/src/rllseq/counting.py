"""Exact enumeration of runlength-limited sequences and restricted compositions.

All counts are Python integers.  Two independent routes compute the
``(n, w, r)`` census:

* :func:`census` runs the block recurrence (append one run of zeros and one
  run of ones at a time), seeded with closed forms for ``r <= 2``;
* :func:`count_wr_fast` / :func:`census_fast` multiply composition counts,
  which is the only route used for large ``n``.

:func:`oracle_census` enumerates all ``2**n`` strings and shares no code with
either route.
"""
from __future__ import annotations

import csv
import io
import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

from .constraints import RunSet
from .errors import NotBlockAligned, TooLarge

#: Largest length for which the cube recurrence may be run.
RECURRENCE_MAX = 256
#: Largest length the brute-force oracle accepts.
ORACLE_MAX = 24


@dataclass
class Census:
    """Counts ``S_L(n, w, r)`` of length-``n`` sequences by weight and runs.

    ``table`` holds only the nonzero entries; missing keys read as 0.
    """

    n: int
    table: dict[tuple[int, int], int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.table.values())

    def __getitem__(self, key: tuple[int, int]) -> int:
        return self.table.get(key, 0)

    def weight_marginal(self, w: int) -> int:
        return sum(c for (ww, _), c in self.table.items() if ww == w)

    def runs_marginal(self, r: int) -> int:
        return sum(c for (_, rr), c in self.table.items() if rr == r)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Census):
            return NotImplemented
        return self.n == other.n and self.table == other.table

    def rows(self) -> list[tuple[int, int, int]]:
        return [(w, r, c) for (w, r), c in sorted(self.table.items())]

    def to_csv(self) -> str:
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(["n", "w", "r", "count"])
        for w, r, c in self.rows():
            out.writerow([self.n, w, r, str(c)])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "entries": [{"w": w, "r": r, "count": str(c)} for w, r, c in self.rows()],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Census":
        return cls(obj["n"], {(e["w"], e["r"]): int(e["count"]) for e in obj["entries"]})


# ---------------------------------------------------------------------------
# compositions


def _convolve(seq: list[int], L: RunSet, m_max: int) -> list[int]:
    """``out[m] = sum_{l in L, l <= m} seq[m - l]`` for ``m <= m_max``."""
    out = [0] * (m_max + 1)
    span = L.span(m_max)
    if span is not None:
        lo, hi = span
        # prefix[j] = seq[0] + ... + seq[j-1]
        prefix = [0]
        acc = 0
        for v in seq[: m_max + 1]:
            acc += v
            prefix.append(acc)
        for m in range(lo, m_max + 1):
            out[m] = prefix[m - lo + 1] - prefix[max(m - hi, 0)]
        return out
    parts = L.upto(m_max)
    for m in range(m_max + 1):
        out[m] = sum(seq[m - ell] for ell in parts if ell <= m)
    return out


def iter_composition_rows(L: RunSet, m_max: int) -> Iterator[list[int]]:
    """Yield rows ``k = 0, 1, 2, ...`` where ``row[m] = C_L(m, k)`` for ``m <= m_max``."""
    row = [1] + [0] * m_max
    while True:
        yield row
        row = _convolve(row, L, m_max)


def composition_rows(L: RunSet, m_max: int, k_max: int) -> list[list[int]]:
    return list(itertools.islice(iter_composition_rows(L, m_max), k_max + 1))


class CompositionTable:
    """Table of ``C_L(n, m)``: ordered ``m``-tuples from ``L`` summing to ``n``."""

    def __init__(self, parts: RunSet, n_max: int, m_max: int):
        self.parts = parts
        self.n_max = n_max
        self.m_max = m_max
        self._rows = composition_rows(parts, n_max, m_max)

    def __getitem__(self, key: tuple[int, int]) -> int:
        n, m = key
        if n < 0 or m < 0:
            return 0
        if n > self.n_max or m > self.m_max:
            raise KeyError(key)
        return self._rows[m][n]


def compositions(L: RunSet, n: int, m: int) -> int:
    """Number of ``m``-part compositions of ``n`` with parts in ``L``."""
    if n < 0 or m < 0:
        return 0
    if m == 0:
        return int(n == 0)
    if m * L.lmin > n or m * L.lmax < n:
        return 0
    return composition_rows(L, n, m)[m][n]


def count_total(L: RunSet, n: int) -> int:
    """Number of binary strings of length ``n`` whose runs all have lengths in ``L``."""
    if n < 0:
        return 0
    if n == 0:
        return 1
    # T(m) = compositions of m into any number of parts from L
    span = L.span(n)
    T = [1] + [0] * n
    if span is not None:
        lo, hi = span
        prefix = [0, 1]
        for m in range(1, n + 1):
            if m >= lo:
                T[m] = prefix[m - lo + 1] - prefix[max(m - hi, 0)]
            prefix.append(prefix[-1] + T[m])
    else:
        parts = L.upto(n)
        for m in range(1, n + 1):
            T[m] = sum(T[m - ell] for ell in parts if ell <= m)
    # each composition of n gives two strings (choice of first symbol)
    return 2 * T[n]


def _product_form(zero_rows, one_rows, n: int, w: int, r: int) -> int:
    """Count with ``r`` alternating runs, ones summing to ``w``, zeros to ``n - w``."""
    if r == 0:
        return int(n == 0 and w == 0)
    lo, hi = r // 2, (r + 1) // 2
    z = n - w
    return zero_rows[lo][z] * one_rows[hi][w] + zero_rows[hi][z] * one_rows[lo][w]


def _rows_upto(L: RunSet, m_max: int, k_max: int) -> list[list[int]]:
    return composition_rows(L, max(m_max, 0), k_max)


def count_wr_fast(L: RunSet, n: int, w: int, r: int) -> int:
    """``S_L(n, w, r)`` through the composition-product identity."""
    if n < 0 or w < 0 or w > n or r < 0:
        return 0
    rows = _rows_upto(L, max(w, n - w), (r + 1) // 2)
    return _product_form(rows, rows, n, w, r)


def count_runs_marginal(L: RunSet, n: int, r: int) -> int:
    """``S_L(n, *, r) = 2 C_L(n, r)`` for ``r >= 1``."""
    if r < 1:
        raise ValueError("r must be >= 1")
    return 2 * compositions(L, n, r)


def count_weight_marginal(L: RunSet, n: int, w: int) -> int:
    """``S_L(n, w, *)``: number of admissible strings of weight ``w``."""
    if n < 0 or w < 0 or w > n:
        return 0
    if n == 0:
        return 1
    z = n - w
    total = 0
    prev = None
    for k, row in enumerate(iter_composition_rows(L, max(w, z))):
        if prev is not None:
            # r = 2k - 1 (needs rows k-1 and k), r = 2k (row k twice)
            total += prev[z] * row[w] + row[z] * prev[w]
            total += 2 * row[z] * row[w]
        if k * L.lmin > max(w, z):
            break
        prev = row
    return total


def count_two_sets(L0: RunSet, L1: RunSet, n: int, w: int, r: int) -> int:
    """Strings with zero-runs in ``L0`` and one-runs in ``L1``, by ``(n, w, r)``."""
    if n < 0 or w < 0 or w > n or r < 0:
        return 0
    k = (r + 1) // 2
    zero_rows = composition_rows(L0, n - w, k)
    one_rows = composition_rows(L1, w, k)
    return _product_form(zero_rows, one_rows, n, w, r)


def census_fast(L: RunSet, n: int) -> Census:
    """Full census through the composition-product identity."""
    if n == 0:
        return Census(0, {(0, 0): 1})
    r_max = n // L.lmin
    rows = composition_rows(L, n, (r_max + 1) // 2)
    table = {}
    for r in range(1, r_max + 1):
        for w in range(n + 1):
            c = _product_form(rows, rows, n, w, r)
            if c:
                table[(w, r)] = c
    return Census(n, table)


# ---------------------------------------------------------------------------
# block recurrence


def _append_runs(layer: list[list[int]], parts: list[int], n_max: int) -> list[list[int]]:
    """Append a run of ones then a run of zeros to every entry of ``layer[m][u]``."""
    ones = [[0] * (m + 1) for m in range(n_max + 1)]
    for m, row in enumerate(layer):
        for u, v in enumerate(row):
            if v:
                for ell in parts:
                    if m + ell > n_max:
                        break
                    ones[m + ell][u + ell] += v
    out = [[0] * (m + 1) for m in range(n_max + 1)]
    for m, row in enumerate(ones):
        for u, v in enumerate(row):
            if v:
                for ell in parts:
                    if m + ell > n_max:
                        break
                    out[m + ell][u] += v
    return out


@lru_cache(maxsize=32)
def census_upto(L: RunSet, n_max: int) -> tuple[Census, ...]:
    """Censuses for every length ``0..n_max`` from the block recurrence.

    ``S(n, w, r) = sum_{l, l'} S(n - l - l', w - l', r - 2)`` holds for
    ``r >= 3``: removing the last two runs leaves a nonempty prefix whose
    last symbol fixes the order of the removed blocks.  Layers ``r = 1`` and
    ``r = 2`` are filled directly.
    """
    if n_max > RECURRENCE_MAX:
        raise TooLarge(f"cube recurrence limited to n <= {RECURRENCE_MAX}; use census_fast")
    parts = L.upto(n_max)
    tables: list[dict] = [dict() for _ in range(n_max + 1)]
    tables[0][(0, 0)] = 1

    odd = [[0] * (m + 1) for m in range(n_max + 1)]
    for ell in parts:
        odd[ell][0] += 1
        odd[ell][ell] += 1
    even = [[0] * (m + 1) for m in range(n_max + 1)]
    for u in parts:
        for z in parts:
            if u + z <= n_max:
                even[u + z][u] += 2

    layers = {1: odd, 2: even}
    while layers:
        r = min(layers)
        layer = layers.pop(r)
        empty = True
        for m, row in enumerate(layer):
            for u, v in enumerate(row):
                if v:
                    tables[m][(u, r)] = v
                    empty = False
        if not empty:
            layers[r + 2] = _append_runs(layer, parts, n_max)
    return tuple(Census(m, tables[m]) for m in range(n_max + 1))


def census(L: RunSet, n: int) -> Census:
    """Census of ``S_L(n, w, r)`` from the block recurrence (``n <= 256``)."""
    return census_upto(L, n)[n]


# ---------------------------------------------------------------------------
# other constrained families


def count_sec(lb: int, wb: int, n: int, w: int) -> int:
    """Concatenations of length-``lb`` blocks of weight ``>= wb`` with total weight ``w``."""
    if lb < 1 or not 0 <= wb <= lb:
        raise ValueError("need lb >= 1 and 0 <= wb <= lb")
    if n % lb:
        raise NotBlockAligned(f"lb={lb} does not divide n={n}")
    if w < 0 or w > n:
        return 0
    block = [(j, math.comb(lb, j)) for j in range(wb, lb + 1)]
    poly = [1] + [0] * w
    for _ in range(n // lb):
        nxt = [0] * (w + 1)
        for s, v in enumerate(poly):
            if v:
                for j, c in block:
                    if s + j > w:
                        break
                    nxt[s + j] += v * c
        poly = nxt
    return poly[w]


def count_manhattan(q: int, n: int, w: int) -> int:
    """Sequences in ``{0..q-1}^n`` with coordinate sum ``w``."""
    if q < 2:
        raise ValueError("q must be >= 2")
    if n < 0 or w < 0:
        return 0
    row = [1] + [0] * w
    for _ in range(n):
        prefix = list(itertools.accumulate(row, initial=0))
        row = [prefix[s + 1] - prefix[max(s - q + 1, 0)] for s in range(w + 1)]
    return row[w]


# ---------------------------------------------------------------------------
# brute-force oracle


@lru_cache(maxsize=8)
def _run_profiles(n: int) -> Counter:
    """Counter of (weight, runs, set of run lengths) over all strings of length n."""
    prof: Counter = Counter()
    if n == 0:
        prof[(0, 0, frozenset())] = 1
        return prof
    for x in range(1 << n):
        s = format(x, f"0{n}b")
        lengths = [len(list(g)) for _, g in itertools.groupby(s)]
        prof[(s.count("1"), len(lengths), frozenset(lengths))] += 1
    return prof


def oracle_census(L: RunSet, n: int) -> Census:
    """Census by exhaustive enumeration of ``{0,1}^n`` (``n <= 24``)."""
    if n > ORACLE_MAX:
        raise TooLarge(f"oracle enumerates 2^n strings; n={n} exceeds {ORACLE_MAX}")
    table: dict[tuple[int, int], int] = {}
    for (w, r, lengths), c in _run_profiles(n).items():
        if all(ell in L for ell in lengths):
            table[(w, r)] = table.get((w, r), 0) + c
    return Census(n, table)
