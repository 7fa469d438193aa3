"""Distribution functions and pair classification at finite resolution.

Limits (liminf, limsup in n) are replaced by running minima and maxima of
F^(n) over a geometric horizon schedule; every verdict carries the numbers
that produced it.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

from .core_words import SymbolStream, Word, horizon_schedule

GAP_TOL = Fraction(1, 8)
DC2_MARGIN = Fraction(1, 16)
TOL_LOW = Fraction(1, 2 ** 10)
TOL_HIGH = Fraction(1, 4)


@dataclass(frozen=True)
class OrbitSource:
    step: Callable[[Any], Any]
    dist: Callable[[Any, Any], Fraction]
    diameter: Fraction
    name: str = ""

    def orbit(self, x, n: int) -> list:
        out = [x]
        for _ in range(n - 1):
            x = self.step(x)
            out.append(x)
        return out


def shift_source(scan: int) -> OrbitSource:
    """Shift map on points (stream, offset); offset i stands for sigma^i(stream).

    Distances are rho scanned over ``scan`` symbols, so agreement on the first
    ``scan`` symbols is reported as distance 0.
    """
    def dist(a, b):
        (x, i), (y, j) = a, b
        u, v = x.window(i + 1, i + 1 + scan), y.window(j + 1, j + 1 + scan)
        for c in range(scan):
            if u[c] != v[c]:
                return Fraction(1, 2 ** (c + 1))
        return Fraction(0)

    return OrbitSource(lambda p: (p[0], p[1] + 1), dist, Fraction(1, 2), f"shift[scan={scan}]")


@dataclass(frozen=True)
class DistributionProfile:
    """F^(n)(t) at each breakpoint t for every n in the schedule.

    ``values[t]`` is the value at the last horizon; ``lower[t]``/``upper[t]`` are
    the running min and max over the schedule.
    """
    horizon: int
    breakpoints: tuple[Fraction, ...]
    schedule: tuple[int, ...]
    table: dict  # n -> tuple of values aligned with breakpoints
    values: dict
    lower: dict
    upper: dict


def _profile_from_counts(breakpoints, schedule, counts_at) -> DistributionProfile:
    table = {n: tuple(Fraction(c, n) for c in counts_at[n]) for n in schedule}
    lower, upper, values = {}, {}, {}
    for j, t in enumerate(breakpoints):
        col = [table[n][j] for n in schedule]
        lower[t], upper[t], values[t] = min(col), max(col), col[-1]
    return DistributionProfile(schedule[-1], tuple(breakpoints), tuple(schedule),
                               table, values, lower, upper)


def distribution(src: OrbitSource, x, y, n: int, breakpoints: Iterable[Fraction],
                 octaves: int = 5, schedule: Sequence[int] | None = None) -> DistributionProfile:
    """F^(m)(t) = |{0 <= i < m : dist(f^i x, f^i y) < t}| / m for m in the schedule ending at n."""
    if n < 1:
        raise ValueError("n >= 1")
    bps = sorted(set(Fraction(t) for t in breakpoints))
    if any(t <= 0 for t in bps):
        raise ValueError("breakpoints must be positive")
    sched = sorted(set(schedule)) if schedule else horizon_schedule(n, octaves)
    if sched[-1] != n:
        raise ValueError("schedule must end at n")
    hist = [0] * (len(bps) + 1)
    counts_at = {}
    si = 0
    for i in range(n):
        d = src.dist(x, y)
        hist[bisect.bisect_right(bps, d)] += 1
        if i + 1 == sched[si]:
            run, acc = [], 0
            for j in range(len(bps)):
                acc += hist[j]
                run.append(acc)
            counts_at[sched[si]] = run
            si += 1
        x, y = src.step(x), src.step(y)
    return _profile_from_counts(bps, sched, counts_at)


def shift_breakpoints(k_max: int) -> list[Fraction]:
    return [Fraction(1, 2 ** k) for k in range(k_max + 1)]


def shift_distribution(x: SymbolStream, y: SymbolStream, k_max: int, cap: int,
                       octaves: int = 5) -> DistributionProfile:
    """Distribution profile of a pair of streams under the shift at t = 2^-k, k <= k_max.

    rho(sigma^i x, sigma^i y) < 2^-k exactly when the length-k windows at i+1
    agree, so one backward pass of capped agreement-run lengths suffices.
    """
    sched = horizon_schedule(cap, octaves)
    u, v = x.prefix(cap + k_max), y.prefix(cap + k_max)
    run = [0] * (cap + k_max + 1)
    for i in range(cap + k_max - 1, -1, -1):
        run[i] = min(run[i + 1] + 1, k_max) if u[i] == v[i] else 0
    hist = [0] * (k_max + 1)
    counts_at, si = {}, 0
    for i in range(cap):
        hist[run[i]] += 1
        if i + 1 == sched[si]:
            # count of windows with run >= k, for k = 0..k_max
            acc, tail = 0, [0] * (k_max + 1)
            for k in range(k_max, -1, -1):
                acc += hist[k]
                tail[k] = acc
            counts_at[sched[si]] = tail
            si += 1
    # breakpoints sorted ascending: 2^-k_max, ..., 1/2, 1
    bps = shift_breakpoints(k_max)[::-1]
    counts_sorted = {n: c[::-1] for n, c in counts_at.items()}
    return _profile_from_counts(bps, sched, counts_sorted)


@dataclass(frozen=True)
class PairVerdict:
    classification: str
    witness: dict = field(default_factory=dict)
    horizons: tuple[int, ...] = ()


def verdict_from_profile(P: DistributionProfile, gap_tol: Fraction = GAP_TOL,
                         dc2_margin: Fraction = DC2_MARGIN) -> PairVerdict:
    gaps = {t: P.upper[t] - P.lower[t] for t in P.breakpoints}
    t_best = max(P.breakpoints, key=lambda t: (gaps[t], t))
    common = {"max_gap": gaps[t_best], "t": t_best,
              "lower": P.lower[t_best], "upper": P.upper[t_best]}
    if all(P.upper[t] == 1 for t in P.breakpoints):
        zero = [t for t in P.breakpoints if P.lower[t] == 0]
        if zero:
            t = max(zero)
            return PairVerdict("DC1-evidence", {**common, "t": t, "lower": Fraction(0),
                                                "upper": Fraction(1)}, P.schedule)
        low = [t for t in P.breakpoints if P.lower[t] < 1 - dc2_margin]
        if low:
            t = max(low)
            return PairVerdict("DC2-evidence", {**common, "t": t, "lower": P.lower[t],
                                                "upper": Fraction(1)}, P.schedule)
    if gaps[t_best] >= gap_tol:
        return PairVerdict("DC3-evidence", common, P.schedule)
    return PairVerdict("no-DC3-at-resolution", common, P.schedule)


def classify_shift_pair(x: SymbolStream, y: SymbolStream, k_max: int, cap: int,
                        octaves: int = 5, gap_tol: Fraction = GAP_TOL) -> PairVerdict:
    """Breakpoint-only classification: F and F* are constant on (2^-k-1, 2^-k],
    so checking t = 2^-k for k <= k_max covers every t > 2^-(k_max+1)."""
    prof = shift_distribution(x, y, k_max, cap, octaves)
    v = verdict_from_profile(prof, gap_tol)
    t = v.witness["t"]
    v.witness["k"] = t.denominator.bit_length() - 1
    return v


def classify_pair(src: OrbitSource, x, y, breakpoints, cap: int, octaves: int = 5,
                  gap_tol: Fraction = GAP_TOL) -> PairVerdict:
    return verdict_from_profile(distribution(src, x, y, cap, breakpoints, octaves), gap_tol)


# ------------------------------------------------------------ densities

@dataclass(frozen=True)
class DensityChain:
    """Counts at each audited horizon n: ones of x, ones of y, positions where x, y differ."""
    schedule: tuple[int, ...]
    ones_x: tuple[int, ...]
    ones_y: tuple[int, ...]
    disagree: tuple[int, ...]

    @property
    def holds(self) -> bool:
        return all(d <= a + b for a, b, d in zip(self.ones_x, self.ones_y, self.disagree))

    @property
    def agreement_density(self) -> Fraction:
        n = self.schedule[-1]
        return 1 - Fraction(self.disagree[-1], n)


def dc3_density_criterion(x: SymbolStream, y: SymbolStream, horizon: int,
                          octaves: int = 5) -> DensityChain:
    sched = horizon_schedule(horizon, octaves)
    u, v = x.prefix(horizon), y.prefix(horizon)
    ox, oy, dd = [], [], []
    for n in sched:
        a, b = u[:n], v[:n]
        ox.append(a.count("1"))
        oy.append(b.count("1"))
        dd.append(sum(1 for p, q in zip(a, b) if p != q))
    return DensityChain(tuple(sched), tuple(ox), tuple(oy), tuple(dd))


@dataclass(frozen=True)
class ReductionRecord:
    """For each n in the schedule: A = windows where x, y differ, B = windows where y is not 0^l,
    E = windows where x is not 0^l.  |A - B| <= E holds exactly."""
    l: int
    schedule: tuple[int, ...]
    A: tuple[int, ...]
    B: tuple[int, ...]
    E: tuple[int, ...]

    @property
    def delta(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(abs(a - b), n) for a, b, n in zip(self.A, self.B, self.schedule))

    @property
    def holds(self) -> bool:
        return all(abs(a - b) <= e for a, b, e in zip(self.A, self.B, self.E))


def reduce_to_zero(x: SymbolStream, y: SymbolStream, l: int, horizon: int,
                   octaves: int = 5) -> ReductionRecord:
    sched = horizon_schedule(horizon, octaves)
    u, v = x.prefix(horizon + l), y.prefix(horizon + l)
    z = "0" * l
    A = B = E = 0
    As, Bs, Es = [], [], []
    si = 0
    for k in range(horizon):
        wu, wv = u[k:k + l], v[k:k + l]
        A += wu != wv
        B += wv != z
        E += wu != z
        if k + 1 == sched[si]:
            As.append(A)
            Bs.append(B)
            Es.append(E)
            si += 1
    return ReductionRecord(l, tuple(sched), tuple(As), tuple(Bs), tuple(Es))


# ------------------------------------------------------------ Li-Yorke

def ly_classify(src: OrbitSource, x, y, cap: int, tol_low: Fraction = TOL_LOW,
                tol_high: Fraction = TOL_HIGH, octaves: int = 5) -> PairVerdict:
    """Observed min and max of dist(f^i x, f^i y) for i < cap.

    asymptotic-evidence: the maximum over the trailing window [cap/2, cap) is <= tol_low.
    LY-evidence: otherwise, min <= tol_low and max >= tol_high.
    """
    sched = horizon_schedule(cap, octaves)
    tail_from = cap // 2
    lo = hi = None
    lo_at = hi_at = 0
    tail_max = Fraction(0)
    for i in range(cap):
        d = src.dist(x, y)
        if lo is None or d < lo:
            lo, lo_at = d, i
        if hi is None or d > hi:
            hi, hi_at = d, i
        if i >= tail_from and d > tail_max:
            tail_max = d
        x, y = src.step(x), src.step(y)
    w = {"min": lo, "min_at": lo_at, "max": hi, "max_at": hi_at, "tail_max": tail_max,
         "tail_from": tail_from, "tol_low": tol_low, "tol_high": tol_high}
    if tail_max <= tol_low:
        return PairVerdict("asymptotic-evidence", w, tuple(sched))
    if lo <= tol_low and hi >= tol_high:
        return PairVerdict("LY-evidence", w, tuple(sched))
    return PairVerdict("no-LY-evidence", w, tuple(sched))


# ------------------------------------------------------------ entropy

@dataclass(frozen=True)
class SeparatedEstimate:
    count: int
    n: int
    eps: Fraction
    indices: tuple[int, ...]

    @property
    def entropy_estimate(self) -> float:
        return math.log(self.count) / self.n


def separated_count(src: OrbitSource, sample: Sequence, n: int, eps) -> SeparatedEstimate:
    """Greedy (f, n, eps)-separated subset of the sample.

    Two points are separated when dist(f^i a, f^i b) > eps for some 0 <= i < n.
    """
    eps = Fraction(eps)
    orbits = [src.orbit(p, n) for p in sample]
    chosen: list[int] = []
    for k, ok in enumerate(orbits):
        if all(any(src.dist(ok[i], orbits[c][i]) > eps for i in range(n)) for c in chosen):
            chosen.append(k)
    return SeparatedEstimate(len(chosen), n, eps, tuple(chosen))


def omega_language(x: SymbolStream, word_len: int, prefix_len: int, tail_start: int) -> set[Word]:
    """Words of length word_len occurring in x_1..x_prefix_len at a position >= tail_start."""
    if tail_start >= prefix_len:
        raise ValueError("tail_start must be < prefix_len")
    s = x.prefix(prefix_len)
    return {s[i:i + word_len] for i in range(max(tail_start, 1) - 1, prefix_len - word_len + 1)}


def is_eventually_periodic_proxy(x: SymbolStream, prefix_len: int, max_period: int) -> int | None:
    """Smallest p <= max_period such that the second half of the prefix is p-periodic."""
    s = x.prefix(prefix_len)
    h = s[prefix_len // 2:]
    for p in range(1, max_period + 1):
        if all(h[i] == h[i + p] for i in range(len(h) - p)):
            return p
    return None
