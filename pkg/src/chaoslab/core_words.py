"""Words, symbol streams, the prefix metric, and density bookkeeping for subsets of N.

Positions are 1-based throughout, matching the convention x = x_1 x_2 x_3 ...
Words are plain ``str`` objects whose characters are alphabet symbols.
"""
from __future__ import annotations

import bisect
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, NamedTuple, Sequence

Word = str


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple[str, ...]

    def __post_init__(self):
        if not self.symbols:
            raise ValueError("alphabet must be non-empty")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("alphabet symbols must be distinct")
        if any(len(s) != 1 for s in self.symbols):
            raise ValueError("symbols must be single characters")

    def __contains__(self, symbol: str) -> bool:
        return symbol in self.symbols

    def validate(self, word: Word) -> Word:
        bad = set(word) - set(self.symbols)
        if bad:
            raise ValueError(f"symbols {sorted(bad)} not in alphabet {self.symbols}")
        return word


BINARY = Alphabet(("0", "1"))


class SymbolStream:
    """A one-sided infinite word given by a deterministic rule.

    ``chunk(start, stop)`` must return the symbols at positions ``start..stop-1``.
    Symbols are memoized as a growing string; extension is guarded by a lock so a
    stream can be shared between threads.
    """

    def __init__(self, chunk: Callable[[int, int], str], name: str = ""):
        self._chunk = chunk
        self._memo = ""
        self._lock = threading.Lock()
        self.name = name

    @classmethod
    def from_rule(cls, rule: Callable[[int], str], name: str = "") -> "SymbolStream":
        return cls(lambda a, b: "".join(rule(i) for i in range(a, b)), name)

    @classmethod
    def constant(cls, symbol: str = "0") -> "SymbolStream":
        return cls(lambda a, b: symbol * (b - a), f"{symbol}^inf")

    @classmethod
    def from_prefix(cls, prefix: Word, tail: str = "0", name: str = "") -> "SymbolStream":
        """``prefix`` followed by ``tail`` repeated forever."""
        n = len(prefix)

        def chunk(a, b):
            head = prefix[a - 1:min(b - 1, n)] if a <= n else ""
            return head + tail * (b - a - len(head))

        return cls(chunk, name or f"{prefix[:12]}{tail}^inf")

    @classmethod
    def periodic(cls, period: Word, preperiod: Word = "", name: str = "") -> "SymbolStream":
        if not period:
            raise ValueError("period must be non-empty")
        p, q = len(preperiod), len(period)

        def chunk(a, b):
            out = []
            for i in range(a, b):
                out.append(preperiod[i - 1] if i <= p else period[(i - p - 1) % q])
            return "".join(out)

        return cls(chunk, name or f"{preperiod}({period})^inf")

    @classmethod
    def indicator(cls, A: "IntegerSet", name: str = "") -> "SymbolStream":
        """Characteristic stream: x_i = 1 iff i is in A."""
        return cls.from_rule(lambda i: "1" if i in A else "0", name or f"1_{A.label}")

    def _extend(self, n: int) -> None:
        if len(self._memo) >= n:
            return
        with self._lock:
            have = len(self._memo)
            if have < n:
                self._memo += self._chunk(have + 1, n + 1)

    def at(self, i: int) -> str:
        if i < 1:
            raise IndexError("positions start at 1")
        self._extend(i)
        return self._memo[i - 1]

    def prefix(self, n: int) -> Word:
        self._extend(n)
        return self._memo[:n]

    def window(self, i: int, j: int) -> Word:
        """x_[i,j) = x_i ... x_{j-1}."""
        self._extend(j - 1)
        return self._memo[i - 1:j - 1]

    def shift(self, k: int = 1) -> "SymbolStream":
        if k == 0:
            return self
        return SymbolStream(lambda a, b: self.window(a + k, b + k), f"s^{k}({self.name})")

    def __repr__(self):
        return f"SymbolStream({self.name or self.prefix(16) + '...'})"


@dataclass(frozen=True)
class IntegerSet:
    """A subset of N = {1, 2, ...} given by a membership predicate.

    ``enumerator(N)`` and ``runner(N)`` are optional fast paths returning the
    sorted members up to N and the maximal runs of consecutive members that
    start at or below N (as ``(start, length)``; a run may extend past N).
    ``max_element`` is set for finite sets so callers can conclude negatives.
    """

    contains: Callable[[int], bool]
    label: str = ""
    enumerator: Callable[[int], list[int]] | None = field(default=None, compare=False)
    runner: Callable[[int], list[tuple[int, int]]] | None = field(default=None, compare=False)
    max_element: int | None = None

    def __contains__(self, m: int) -> bool:
        return m >= 1 and self.contains(m)

    def enumerate_upto(self, N: int) -> list[int]:
        if self.enumerator is not None:
            return self.enumerator(N)
        return [m for m in range(1, N + 1) if self.contains(m)]

    def runs(self, N: int) -> list[tuple[int, int]]:
        if self.runner is not None:
            return self.runner(N)
        out: list[tuple[int, int]] = []
        members = self.enumerate_upto(N)
        for m in members:
            if out and out[-1][0] + out[-1][1] == m:
                out[-1] = (out[-1][0], out[-1][1] + 1)
            else:
                out.append((m, 1))
        if out:
            # the last run may continue past N
            s, n = out[-1]
            while self.contains(s + n):
                n += 1
            out[-1] = (s, n)
        return out


def naturals() -> IntegerSet:
    return IntegerSet(lambda m: m >= 1, "N",
                      enumerator=lambda N: list(range(1, N + 1)),
                      runner=lambda N: [(1, N + 1)] if N >= 1 else [])


def multiples(d: int, offset: int = 0) -> IntegerSet:
    return IntegerSet(lambda m: m % d == offset % d, f"{d}N+{offset}" if offset else f"{d}N",
                      enumerator=lambda N: [m for m in range(1, N + 1) if m % d == offset % d])


def finite_set(elements: Iterable[int], label: str = "") -> IntegerSet:
    members = frozenset(elements)
    if any(m < 1 for m in members):
        raise ValueError("elements of N start at 1")
    ordered = sorted(members)
    return IntegerSet(members.__contains__, label or str(set(ordered)),
                      enumerator=lambda N: ordered[:bisect.bisect_right(ordered, N)],
                      max_element=ordered[-1] if ordered else 0)


def from_runs(runs: Sequence[tuple[int, int]], label: str = "") -> IntegerSet:
    """Union of disjoint blocks {s, ..., s+n-1}, given sorted by start."""
    runs = sorted(runs)
    starts = [s for s, _ in runs]

    def contains(m):
        i = bisect.bisect_right(starts, m) - 1
        return i >= 0 and m < runs[i][0] + runs[i][1]

    def runner(N):
        return [r for r in runs if r[0] <= N]

    def enumerator(N):
        return [m for s, n in runner(N) for m in range(s, min(s + n, N + 1))]

    last = max((s + n - 1 for s, n in runs), default=0)
    return IntegerSet(contains, label, enumerator=enumerator, runner=runner, max_element=last)


def _pstar_contains(m: int) -> bool:
    if m < 4:
        return False
    i = (m.bit_length() - 1) // 2
    return 4 ** i <= m < 4 ** i + i


def _pstar_runs(N: int) -> list[tuple[int, int]]:
    out, i = [], 1
    while 4 ** i <= N:
        out.append((4 ** i, i))
        i += 1
    return out


def p_star() -> IntegerSet:
    """P* = union over i >= 1 of {4^i, ..., 4^i + i - 1}: thick, density zero."""
    return IntegerSet(
        _pstar_contains, "P*",
        enumerator=lambda N: [m for s, n in _pstar_runs(N) for m in range(s, min(s + n, N + 1))],
        runner=_pstar_runs,
    )


class Rho(NamedTuple):
    value: Fraction
    agrees_to_horizon: bool


def common_prefix_length(u: str, v: str) -> int:
    n = min(len(u), len(v))
    for i in range(n):
        if u[i] != v[i]:
            return i
    return n


def metric_rho(x: SymbolStream, y: SymbolStream, horizon: int) -> Rho:
    """rho(x, y) = 2^-k with k = 1 + |longest common prefix|, scanned up to ``horizon``.

    If the streams agree on the whole horizon the value is 0 and the flag is set;
    a zero without the flag never happens.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    c = common_prefix_length(x.prefix(horizon), y.prefix(horizon))
    if c >= horizon:
        return Rho(Fraction(0), True)
    return Rho(Fraction(1, 2 ** (c + 1)), False)


@dataclass(frozen=True)
class Cylinder:
    prefix: Word

    def contains(self, x: SymbolStream) -> bool:
        return x.prefix(len(self.prefix)) == self.prefix


def occurrences(w: Word, a: str) -> int:
    return w.count(a)


def horizon_schedule(cap: int, octaves: int = 5) -> list[int]:
    """Powers of two in [cap / 2^octaves, cap], plus cap itself."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    lo = max(1, cap >> octaves)
    out = []
    p = 1
    while p <= cap:
        if p >= lo:
            out.append(p)
        p *= 2
    if not out or out[-1] != cap:
        out.append(cap)
    return out


@dataclass(frozen=True)
class DensityEstimate:
    at_horizon: Fraction
    lower_est: Fraction
    upper_est: Fraction
    schedule: tuple[int, ...]


def density(A: IntegerSet, horizon: int, octaves: int = 5) -> DensityEstimate:
    """Counting ratios |A ∩ [1, n]| / n along a geometric schedule ending at ``horizon``.

    Only finite-horizon proxies for the lower and upper densities; no limit is claimed.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    schedule = horizon_schedule(horizon, octaves)
    members = A.enumerate_upto(horizon)
    ratios = [Fraction(bisect.bisect_right(members, n), n) for n in schedule]
    return DensityEstimate(ratios[-1], min(ratios), max(ratios), tuple(schedule))


def is_thick(A: IntegerSet, block_len: int, search_bound: int) -> int | None:
    """Least m <= search_bound with {m, ..., m+block_len-1} inside A.

    ``None`` only means no such block starts at or below ``search_bound``.
    """
    if block_len < 1:
        raise ValueError("block_len must be >= 1")
    for s, n in A.runs(search_bound):
        if s > search_bound:
            break
        # a reported run may be cut short for infinite runs; extend it by membership
        while n < block_len and A.contains(s + n):
            n += 1
        if n >= block_len:
            return s
    return None


def language_of_stream(x: SymbolStream, word_len: int, prefix_len: int,
                       start: int = 1) -> dict[Word, list[int]]:
    """Length-``word_len`` factors of x_1..x_{prefix_len} starting at positions >= start."""
    if word_len > prefix_len:
        raise ValueError("word_len must not exceed prefix_len")
    s = x.prefix(prefix_len)
    out: dict[Word, list[int]] = {}
    for i in range(max(start, 1) - 1, prefix_len - word_len + 1):
        out.setdefault(s[i:i + word_len], []).append(i + 1)
    return out


def ones_positions(w: Word, symbol: str = "1") -> list[int]:
    return [i + 1 for i, c in enumerate(w) if c == symbol]
