"""Spacing shifts Sigma_P over {0,1}.

A binary word belongs to the language of Sigma_P when every pair of ones sits at
a distance lying in P.  Most checks here work on Python ints used as bitsets:
bit d of a mask is set when the distance d is present (or allowed).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .core_words import IntegerSet, Rho, SymbolStream, Word, ones_positions

SpacingSet = IntegerSet


class LanguageTooLarge(RuntimeError):
    pass


class InsufficientThickness(RuntimeError):
    pass


def ones(w: Word) -> list[int]:
    return ones_positions(w)


def _bits(positions) -> int:
    m = 0
    for p in positions:
        m |= 1 << p
    return m


def p_mask(P: SpacingSet, N: int) -> int:
    """Bitset of P ∩ [1, N]."""
    mask = 0
    if P.runner is not None:
        for s, n in P.runs(N):
            e = min(s + n - 1, N)
            if e >= s:
                mask |= ((1 << (e - s + 1)) - 1) << s
        return mask
    return _bits(P.enumerate_upto(N))


def difference_mask(pos: list[int]) -> int:
    """Bitset of all positive differences between the given positions."""
    if len(pos) < 2:
        return 0
    B = _bits(pos)
    D = 0
    for p in pos:
        D |= B >> p
    return D & ~1


def is_member(w: Word, P: SpacingSet) -> bool:
    pos = ones(w)
    if len(pos) < 2:
        return True
    D = difference_mask(pos)
    return D & ~p_mask(P, pos[-1] - pos[0]) == 0


def language(P: SpacingSet, n: int, guard: int = 1 << 16) -> set[Word]:
    """All length-n words of Sigma_P, by depth-first extension.

    Languages of spacing shifts are factorial, so a prefix that fails membership
    can be pruned; only the newly added one needs checking at each step.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    out: set[Word] = set()
    stack: list[tuple[str, tuple[int, ...]]] = [("", ())]
    while stack:
        w, pos = stack.pop()
        if len(w) == n:
            out.add(w)
            if len(out) > guard:
                raise LanguageTooLarge(f"|L_{n}| exceeds guard {guard}")
            continue
        stack.append((w + "0", pos))
        i = len(w) + 1
        if all((i - p) in P for p in pos):
            stack.append((w + "1", pos + (i,)))
    return out


def language_brute_force(P: SpacingSet, n: int) -> set[Word]:
    return {w for w in ("".join(t) for t in itertools.product("01", repeat=n)) if is_member(w, P)}


# ---------------------------------------------------------------- thick sets

def cantor_unpair(n: int) -> tuple[int, int]:
    """Bijection N -> N x N along anti-diagonals, n = 1 -> (1,1), 2 -> (1,2), 3 -> (2,1)."""
    if n < 1:
        raise ValueError("n >= 1")
    s = 2
    while (s - 1) * s // 2 < n:
        s += 1
    a = n - (s - 2) * (s - 1) // 2
    return a, s - a


def cantor_pair(a: int, b: int) -> int:
    s = a + b
    return (s - 2) * (s - 1) // 2 + a


@dataclass
class ThickDecomposition:
    """Partition of P ∩ [1, horizon] into ``parts`` pieces.

    ``blocks[n] = j_n`` for n >= 2, with Q_n = {j_n, ..., j_n + n}.  The block Q_n
    goes to part min(a, parts) where (a, b) = cantor_unpair(n); Q_1 (everything
    in P outside the blocks) goes to part 1.  Membership beyond ``horizon`` is not
    determined by the finite computation and raises.
    """

    source: SpacingSet
    parts: int
    bound: int
    horizon: int
    blocks: dict[int, int]
    q1_runs: list[tuple[int, int]]
    _part_cache: dict = field(default_factory=dict, repr=False)

    def block(self, n: int) -> tuple[int, int]:
        j = self.blocks[n]
        return j, j + n

    def block_part(self, n: int) -> int:
        if n == 1:
            return 1
        return min(cantor_unpair(n)[0], self.parts)

    def runs_of_part(self, j: int) -> list[tuple[int, int]]:
        if not 1 <= j <= self.parts:
            raise ValueError(f"part index {j} outside 1..{self.parts}")
        if j in self._part_cache:
            return self._part_cache[j]
        iv = [(s, s + n) for n, s in self.blocks.items() if self.block_part(n) == j]
        if j == 1:
            iv += [(s, s + n - 1) for s, n in self.q1_runs]
        iv.sort()
        merged: list[list[int]] = []
        for a, b in iv:
            if merged and merged[-1][1] + 1 == a:
                merged[-1][1] = b
            else:
                merged.append([a, b])
        runs = [(a, b - a + 1) for a, b in merged]
        self._part_cache[j] = runs
        return runs

    def _check(self, m: int):
        if m > self.horizon:
            raise ValueError(f"{m} lies beyond the resolved horizon {self.horizon}")

    def part_index(self, m: int) -> int:
        """Part containing m, or 0 if m is not in P."""
        self._check(m)
        for n, s in self.blocks.items():
            if s <= m <= s + n:
                return self.block_part(n)
        return 1 if m in self.source else 0

    def part(self, j: int) -> IntegerSet:
        runs = self.runs_of_part(j)
        members = frozenset(m for s, n in runs for m in range(s, s + n)) if \
            sum(n for _, n in runs) <= 1 << 20 else None

        def contains(m):
            self._check(m)
            if members is not None:
                return m in members
            return any(s <= m < s + n for s, n in runs)

        def runner(N):
            self._check(N)
            return [r for r in runs if r[0] <= N]

        def enumerator(N):
            return [m for s, n in runner(N) for m in range(s, min(s + n, N + 1))]

        return IntegerSet(contains, f"{self.source.label}_{j}/{self.parts}",
                          enumerator=enumerator, runner=runner)


def thick_decompose(P: SpacingSet, parts: int, bound: int,
                    require_len: int | None = None) -> ThickDecomposition:
    """Minimal-start block recipe: Q_n is the earliest run of n+1 members of P
    starting after the end of Q_{n-1}, for n = 2, 3, ... while Q_n fits in [1, bound].

    ``require_len``: if given, every part must contain a block of at least this
    many consecutive integers below ``bound``.
    """
    if parts < 1:
        raise ValueError("parts >= 1")
    runs = P.runs(bound)
    blocks: dict[int, int] = {}
    prev_end, n, ri = 0, 2, 0
    while True:
        found = None
        while ri < len(runs):
            s, ln = runs[ri]
            j = max(s, prev_end + 1)
            if j + n <= s + ln - 1:
                if j + n <= bound:
                    found = j
                break
            ri += 1
        if found is None:
            break
        blocks[n] = found
        prev_end = found + n
        n += 1
    if 2 not in blocks:
        raise InsufficientThickness(f"no block of 3 consecutive members of {P.label} below {bound}")

    # elements after the last block are final only up to the first run that
    # could still host a later block
    horizon = bound
    for s, ln in runs:
        if s + ln - 1 > bound:
            horizon = min(horizon, max(s, prev_end + 1) - 1)
            break
    q1: list[tuple[int, int]] = []
    cuts = sorted((s, s + k) for k, s in blocks.items())
    for s, ln in runs:
        a, b = s, min(s + ln - 1, horizon)
        for cs, ce in cuts:
            if ce < a or cs > b:
                continue
            if cs > a:
                q1.append((a, cs - a))
            a = ce + 1
        if a <= b:
            q1.append((a, b - a + 1))
    D = ThickDecomposition(P, parts, bound, horizon, blocks, q1)
    if require_len is not None:
        for j in range(1, parts + 1):
            if not any(ln >= require_len for _, ln in D.runs_of_part(j)):
                raise InsufficientThickness(
                    f"part {j} has no block of length {require_len} below {bound}")
    return D


# ------------------------------------------------------- transitive points

def _fits(P: SpacingSet, runs, new: list[int], old: list[int]) -> bool:
    if not new or not old:
        return True
    lo = new[0] - old[-1]
    hi = new[-1] - old[0]
    for s, n in runs:
        if s <= lo and hi < s + n:
            return True
        if s > lo:
            break
    return all((a - b) in P for a in new for b in old)


def words_upto(P: SpacingSet, k: int) -> list[Word]:
    out = []
    for n in range(1, k + 1):
        out += sorted(language(P, n))
    return out


def transitive_point(P: SpacingSet, word_budget: int, length: int) -> SymbolStream:
    """Prefix of length ``length`` of a point of Sigma_P containing the language
    words of length <= word_budget, followed by 0^inf.

    Words are appended round after round; before each word the shortest run of
    zeros is inserted that keeps every cross distance inside P.  The search for
    that gap only visits candidates aligning the first new one with an element of
    P.  Construction stops at the first word that cannot be placed within
    ``length`` and the remainder is zero-filled.
    """
    words = words_upto(P, word_budget)
    runs = P.runs(length)
    members = P.enumerate_upto(length)
    parts: list[str] = []
    L = 0
    old: list[int] = []
    placed_any = True
    while placed_any:
        placed_any = False
        for u in words:
            U = ones(u)
            if not U or not old:
                g = 0
            else:
                g = None
                c0 = U[0] - old[-1]  # distance of the first new one from the last old one, at g = 0
                for p in members:
                    gg = p - (L + c0)
                    if gg < 0:
                        continue
                    if L + gg + len(u) > length:
                        break
                    if _fits(P, runs, [L + gg + b for b in U], old):
                        g = gg
                        break
            if g is None or L + g + len(u) > length:
                placed_any = False
                break
            parts.append("0" * g + u)
            old += [L + g + b for b in U]
            L += g + len(u)
            placed_any = True
    prefix = "".join(parts)
    return SymbolStream.from_prefix(prefix, "0", name=f"z[{P.label},{word_budget}]")


# ---------------------------------------------------------- weak mixing

@dataclass(frozen=True)
class WeakMixingResult:
    status: str  # "certificate" | "fails" | "inconclusive"
    m: int
    bound: int
    gaps: dict = field(default_factory=dict, compare=False)
    failing: tuple | None = None
    max_gap: int = 0


def _gap_mask(u: Word, v: Word, Pm: int, bound: int) -> int:
    """Bitset of gaps n in [0, bound] with u 0^n v in the language (u, v assumed members)."""
    full = (1 << (bound + 1)) - 1
    G = full
    m = len(u)
    for a in ones(u):
        for b in ones(v):
            G &= Pm >> (m - a + b)
    return G & full


def weak_mixing_check(P: SpacingSet, m: int, bound: int) -> WeakMixingResult:
    """For all u1, u2, v1, v2 in L_m, look for one gap length n <= bound such that
    u1 0^n v1 and u2 0^n v2 are both in the language.
    """
    L = sorted(language(P, m))
    Pm = p_mask(P, bound + 2 * m + 1)
    masks = {(u, v): _gap_mask(u, v, Pm, bound) for u in L for v in L}
    gaps = {}
    worst = 0
    for (u1, v1), g1 in masks.items():
        for (u2, v2), g2 in masks.items():
            both = g1 & g2
            if not both:
                finite = P.max_element is not None and bound >= P.max_element
                return WeakMixingResult("fails" if finite else "inconclusive", m, bound,
                                        gaps, (u1, u2, v1, v2), worst)
            n = (both & -both).bit_length() - 1
            gaps[(u1, u2, v1, v2)] = n
            worst = max(worst, n)
    return WeakMixingResult("certificate", m, bound, gaps, None, worst)


# ---------------------------------------------------------- proximality

@dataclass(frozen=True)
class ProximalityEstimate:
    value: Fraction
    agrees_to_horizon: bool
    at_shift: int
    horizon: int
    scan: int


def proximality_estimate(P: SpacingSet, x: SymbolStream, horizon: int,
                         scan: int = 64, check_member: bool = True) -> ProximalityEstimate:
    """min over 0 <= i < horizon of rho(sigma^i x, 0^inf), each rho scanned over ``scan`` symbols."""
    s = x.prefix(horizon + scan)
    if check_member and not is_member(s, P):
        raise ValueError("stream prefix is not in the language of Sigma_P")
    best = None
    nxt = len(s) + 1  # next position holding a one, scanning backwards
    for i in range(len(s), 0, -1):
        if s[i - 1] == "1":
            nxt = i
        if i <= horizon:
            run = nxt - i  # zeros starting at position i
            if best is None or run > best[0]:
                best = (run, i - 1)
    run, at = best
    if run >= scan:
        return ProximalityEstimate(Fraction(0), True, at, horizon, scan)
    return ProximalityEstimate(Fraction(1, 2 ** (run + 1)), False, at, horizon, scan)


def rho_to_zero(x: SymbolStream, shift: int, scan: int) -> Rho:
    w = x.window(shift + 1, shift + 1 + scan)
    k = w.find("1")
    if k < 0:
        return Rho(Fraction(0), True)
    return Rho(Fraction(1, 2 ** (k + 1)), False)
