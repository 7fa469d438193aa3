"""A zero-density shift extended level by level until it becomes mixing.

Level 0 is X ∪ W, where W is the orbit closure of the indicator stream of
{2^j : j >= 1}.  Level 1 adds the orbits of 0^a 1 0^b 1 0^inf with b >= 2.
Level l+1 (l >= 1) adds the orbits of 0^a u 0^b v 0^inf with u, v words of
length l in the level-l language and b >= beta_min(l), the least b with
phi_b > 2 phi_l, phi being the ones-count table of level 0.

Everything here is exact and finite: languages are materialized up to a depth
cap, and membership of longer words is decided by structural recursion.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from .core_words import SymbolStream, Word, horizon_schedule, ones_positions

DEFAULT_DEPTH_CAP = 12


class DepthExceeded(RuntimeError):
    pass


class DensityPremiseViolated(ValueError):
    pass


def powers_of_two_stream() -> SymbolStream:
    """x_i = 1 iff i = 2^j with j >= 1, so the stream starts 0101000100000001."""
    def rule(i):
        return "1" if i >= 2 and i & (i - 1) == 0 else "0"
    return SymbolStream.from_rule(rule, "1_{2^j}")


def in_W(w: Word) -> bool:
    """Is w a factor of the powers-of-two indicator stream?

    Two consecutive ones fix the window: the first sits at 2^a where 2^a is the
    gap to the second.  Words with at most one 1 always occur.
    """
    r = ones_positions(w)
    if len(r) <= 1:
        return True
    d = r[1] - r[0]
    if d < 2 or d & (d - 1):
        return False
    p = d - r[0]  # window covers positions p+1 .. p+len(w)
    if p < 0:
        return False
    want = {p + x for x in r}
    have = set()
    q = 2
    while q <= p + len(w):
        if q > p:
            have.add(q)
        q *= 2
    return have == want


def zero_shift_contains(w: Word) -> bool:
    return "1" not in w


def max_ones_in_windows(s: str, n: int) -> int:
    if n > len(s):
        raise ValueError("window longer than text")
    c = best = s[:n].count("1")
    for i in range(n, len(s)):
        c += (s[i] == "1") - (s[i - n] == "1")
        best = max(best, c)
    return best


@dataclass
class SeedShift:
    """X_0 = X ∪ W.  ``x_contains`` decides membership in the language of X;
    ``x_phi`` (optional) gives X's max ones-count for any window length."""

    x_contains: Callable[[Word], bool] = zero_shift_contains
    x_phi: Callable[[int], int] | None = lambda n: 0
    name: str = "{0^inf} ∪ W"
    depth_cap: int = DEFAULT_DEPTH_CAP

    def contains(self, w: Word) -> bool:
        return in_W(w) or self.x_contains(w)

    def phi_W(self, n: int) -> int:
        # windows beyond position 2n contain at most one power of two
        return max_ones_in_windows(powers_of_two_stream().prefix(4 * n + 8), n)

    def phi(self, n: int) -> int:
        if n < 1:
            return 0
        if self.x_phi is not None:
            px = self.x_phi(n)
        elif n <= self.depth_cap:
            px = max((w.count("1") for w in _all_words(n) if self.x_contains(w)), default=0)
        else:
            raise DepthExceeded(f"phi_{n} of X needs x_phi beyond depth {self.depth_cap}")
        return max(px, self.phi_W(n))


def _all_words(n: int):
    return ("".join(t) for t in itertools.product("01", repeat=n))


def seed(x_contains: Callable[[Word], bool] = zero_shift_contains,
         x_phi: Callable[[int], int] | None = lambda n: 0,
         depth_cap: int = DEFAULT_DEPTH_CAP, name: str = "") -> SeedShift:
    """Level 0 of the tower.  Rejects X when 1^depth_cap is one of its words (a
    point with a long run of ones cannot have zero density of ones)."""
    if x_contains("1" * depth_cap):
        raise DensityPremiseViolated(f"1^{depth_cap} lies in the language of X")
    if x_phi is not None:
        for n in horizon_schedule(1 << 10, 10):
            if 2 * x_phi(n) > n and n >= depth_cap:
                raise DensityPremiseViolated(f"phi_{n} of X exceeds n/2")
    return SeedShift(x_contains, x_phi, name or "X ∪ W", depth_cap)


class Tower:
    """Levels X_0 ⊂ X_1 ⊂ ... of the construction, with memoized membership."""

    def __init__(self, base: SeedShift, depth_cap: int | None = None, max_beta: int = 1 << 12):
        self.base = base
        self.depth_cap = depth_cap if depth_cap is not None else base.depth_cap
        self.max_beta = max_beta
        self._phi0: dict[int, int] = {}
        self._lang: dict[tuple[int, int], frozenset] = {}
        self.contains = lru_cache(maxsize=None)(self._contains)

    # -- phi tables
    def phi0(self, n: int) -> int:
        if n not in self._phi0:
            self._phi0[n] = self.base.phi(n)
        return self._phi0[n]

    def beta_min(self, l: int) -> int:
        """Least beta with phi_beta > 2 phi^l_l (phi from level 0 on the left)."""
        if l == 0:
            return 2
        target = 2 * self.phi(l, l)
        b = 1
        while self.phi0(b) <= target:
            b += 1
            if b > self.max_beta:
                raise DepthExceeded(f"no beta <= {self.max_beta} with phi_beta > {target}")
        return b

    def phi(self, level: int, n: int) -> int:
        if n == 0:
            return 0
        return max(w.count("1") for w in self.language(n, level))

    # -- languages
    def language(self, n: int, level: int) -> frozenset:
        """Exhaustive: all length-n binary words accepted by ``contains`` at ``level``."""
        if n > self.depth_cap:
            raise DepthExceeded(f"n = {n} exceeds depth cap {self.depth_cap}")
        key = (n, level)
        if key not in self._lang:
            self._lang[key] = frozenset(w for w in _all_words(n) if self.contains(w, level))
        return self._lang[key]

    def _contains(self, w: Word, level: int) -> bool:
        if level == 0:
            return self.base.contains(w)
        return self.contains(w, level - 1) or self.in_J(w, level)

    def in_J(self, w: Word, level: int) -> bool:
        """Is w a factor of a point added at ``level``?"""
        r = ones_positions(w)
        if not r:
            return True
        if level == 1:
            return len(r) == 1 or (len(r) == 2 and r[1] - r[0] >= 3)
        l = level - 1
        beta = self.beta_min(l)
        glue = self.language(l, l)
        for u in glue:
            for o in range(r[0] - l, r[0]):
                if not _matches(w, u, o):
                    continue
                rest = [x for x in r if x > o + l]
                if not rest:
                    return True
                lo = o + l + beta  # earliest start offset for v
                for o2 in range(max(lo, rest[-1] - l), rest[0]):
                    for v in glue:
                        if _matches(w, v, o2):
                            return True
        return False

    # -- generation (independent of ``contains``)
    def j_factors(self, n: int, level: int) -> dict[Word, set[int]]:
        """Length-n windows of the generating points of J_level, each tagged with
        the case it came from: 1 when n <= beta, 2 when n > beta."""
        out: dict[Word, set[int]] = {}
        pad = "0" * n
        if level == 1:
            pairs, betas = [("1", "1")], range(2, max(2, n) + 1)
        else:
            l = level - 1
            glue = sorted(self.language(l, l))
            pairs = [(u, v) for u in glue for v in glue]
            b0 = self.beta_min(l)
            betas = range(b0, max(b0, n) + 1)
        for b in betas:
            case = 1 if n <= b else 2
            for u, v in pairs:
                s = pad + u + "0" * b + v + pad
                for i in range(len(s) - n + 1):
                    out.setdefault(s[i:i + n], set()).add(case)
        return out

    def generated_language(self, n: int, level: int) -> frozenset:
        if level == 0:
            W = powers_of_two_stream().prefix(8 * n + 16)
            words = {W[i:i + n] for i in range(len(W) - n + 1)}
            words |= {w for w in _all_words(n) if self.base.x_contains(w)}
            return frozenset(words)
        return self.generated_language(n, level - 1) | frozenset(self.j_factors(n, level))

    def level(self, l: int) -> "TowerLevel":
        return TowerLevel(self, l)


def _matches(w: Word, u: Word, o: int) -> bool:
    """u placed so that u_1 sits at w-position o+1 agrees with w on their overlap."""
    for i in range(max(0, -o), min(len(u), len(w) - o)):
        if w[o + i] != u[i]:
            return False
    return True


@dataclass(frozen=True)
class TowerLevel:
    tower: Tower
    index: int

    def language(self, n: int) -> frozenset:
        return self.tower.language(n, self.index)

    def phi(self, n: int) -> int:
        return self.tower.phi(self.index, n)

    def contains(self, w: Word) -> bool:
        return self.tower.contains(w, self.index)


def extend(level: TowerLevel) -> TowerLevel:
    return TowerLevel(level.tower, level.index + 1)


def phi(level: TowerLevel, n: int) -> int:
    return level.phi(n)


def phi_table(tower: Tower, max_n: int, level: int) -> list[int]:
    return [tower.phi(level, n) for n in range(max_n + 1)]


def is_subadditive(table: list[int]) -> bool:
    N = len(table) - 1
    return all(table[a + b] <= table[a] + table[b] for a in range(N + 1) for b in range(N + 1 - a))


@dataclass(frozen=True)
class MixingCertificate:
    status: str  # "certificate" | "inconclusive"
    u: Word
    v: Word
    N: int | None
    window: int
    levels: dict = field(default_factory=dict)


def mixing_check(tower: Tower, u: Word, v: Word, window: int = 16, max_level: int = 5,
                 max_gap: int = 256) -> MixingCertificate:
    """Least N such that u 0^n v lies in some level's language for every n in [N, N + window].

    ``levels[n]`` records the first level at which the gap n works.
    """
    first: dict[int, int] = {}
    for n in range(max_gap + window + 1):
        w = u + "0" * n + v
        for L in range(max_level + 1):
            if tower.contains(w, L):
                first[n] = L
                break
    for N in range(max_gap + 1):
        if all(n in first for n in range(N, N + window + 1)):
            return MixingCertificate("certificate", u, v, N, window,
                                     {n: first[n] for n in range(N, N + window + 1)})
    return MixingCertificate("inconclusive", u, v, None, window, {})


def j_point(u: Word, beta: int, v: Word, alpha: int = 0) -> SymbolStream:
    return SymbolStream.from_prefix("0" * alpha + u + "0" * beta + v, "0",
                                    name=f"0^{alpha}{u}0^{beta}{v}0^inf")


@dataclass(frozen=True)
class AuditRow:
    name: str
    n: int
    ones: int
    phi: int

    @property
    def ok(self) -> bool:
        return self.ones <= self.phi


def zero_density_audit(tower: Tower, samples: dict[str, SymbolStream], horizon: int,
                       octaves: int = 5) -> list[AuditRow]:
    """ones(y_1..y_n) <= phi_n for n on the schedule ending at ``horizon``."""
    rows = []
    for name, y in samples.items():
        s = y.prefix(horizon)
        for n in horizon_schedule(horizon, octaves):
            rows.append(AuditRow(name, n, s[:n].count("1"), tower.phi0(n)))
    return rows
