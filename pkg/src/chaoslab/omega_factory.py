"""Finite families of spacing-shift points whose tail languages realize every
inclusion/exclusion pattern, built from a periodic column schedule.

Column c of the schedule lists a nonempty subset S of {1..N}; member x^(i) has a
one at every column whose subset contains i.  Each member then selects parts of
a thick decomposition of P, and its transitive point lives in the spacing shift
of the union of the selected parts.
"""
from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .core_words import IntegerSet, SymbolStream
from .chaos_metrics import omega_language
from .spacing import (SpacingSet, ThickDecomposition, difference_mask, is_member, language,
                      ones, p_mask, proximality_estimate, thick_decompose, transitive_point)


def subset_schedule(N: int) -> list[tuple[int, ...]]:
    """Nonempty subsets of {1..N}, larger subsets first, ties in lexicographic order."""
    subsets = [c for k in range(N, 0, -1) for c in itertools.combinations(range(1, N + 1), k)]
    return subsets


@dataclass(frozen=True)
class ColumnPatternFamily:
    N: int
    columns: tuple[tuple[int, ...], ...]
    members: tuple[SymbolStream, ...]

    @property
    def period(self) -> int:
        return len(self.columns)

    def column_of(self, S) -> int:
        """1-based column (within the first period) realizing exactly the subset S."""
        return self.columns.index(tuple(sorted(S))) + 1

    def member(self, i: int) -> SymbolStream:
        return self.members[i - 1]


def build_family(N: int) -> ColumnPatternFamily:
    if N < 2:
        raise ValueError("N >= 2")
    cols = subset_schedule(N)
    members = tuple(
        SymbolStream.periodic("".join("1" if i in S else "0" for S in cols), name=f"x^({i})")
        for i in range(1, N + 1))
    return ColumnPatternFamily(N, tuple(cols), members)


def q_set(x: SymbolStream, D: ThickDecomposition) -> SpacingSet:
    """Q_x = union of P_n over n <= parts with x_n = 1."""
    sel = [n for n in range(1, D.parts + 1) if x.at(n) == "1"]
    if not sel:
        raise ValueError("x selects no part of the decomposition")
    iv = sorted(r for n in sel for r in D.runs_of_part(n))
    runs: list[tuple[int, int]] = []
    for s, ln in iv:
        if runs and runs[-1][0] + runs[-1][1] == s:
            runs[-1] = (runs[-1][0], runs[-1][1] + ln)
        else:
            runs.append((s, ln))
    starts = [s for s, _ in runs]

    def contains(m):
        if m > D.horizon:
            raise ValueError(f"{m} lies beyond the resolved horizon {D.horizon}")
        k = bisect.bisect_right(starts, m) - 1
        return k >= 0 and m < runs[k][0] + runs[k][1]

    def runner(N):
        if N > D.horizon:
            raise ValueError(f"{N} lies beyond the resolved horizon {D.horizon}")
        return runs[:bisect.bisect_right(starts, N)]

    def enumerator(N):
        return [m for s, ln in runner(N) for m in range(s, min(s + ln, N + 1))]

    label = "+".join(f"P{n}" for n in sel)
    return IntegerSet(contains, label, enumerator=enumerator, runner=runner)


@dataclass
class GammaFamily:
    base: ColumnPatternFamily
    decomposition: ThickDecomposition
    q_sets: tuple[SpacingSet, ...]
    members: tuple[SymbolStream, ...]
    word_budget: int
    length: int

    def member(self, i: int) -> SymbolStream:
        return self.members[i - 1]


def build_gamma(N: int, P: SpacingSet, parts: int, word_budget: int, length: int,
                bound: int | None = None) -> GammaFamily:
    """y^(i) = transitive point of Sigma_{Q_{x^(i)}}, materialized on a prefix of ``length``."""
    fam = build_family(N)
    if bound is None:
        # grow the bound until the decomposition is resolved over the whole prefix
        bound = length
        D = thick_decompose(P, parts, bound)
        while D.horizon < length and bound < 64 * length:
            bound *= 2
            D = thick_decompose(P, parts, bound)
    else:
        D = thick_decompose(P, parts, bound)
    if D.horizon < length:
        raise ValueError(f"decomposition resolved only up to {D.horizon} < {length}")
    qs = tuple(q_set(x, D) for x in fam.members)
    ys = tuple(transitive_point(Q, word_budget, length) for Q in qs)
    return GammaFamily(fam, D, qs, ys, word_budget, length)


@dataclass
class ClauseResult:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)


@dataclass
class ScrambleCertificate:
    indices: tuple[int, ...]
    column: int
    clauses: list[ClauseResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.clauses)

    def failing(self) -> list[str]:
        return [c.name for c in self.clauses if not c.passed]


def scramble_certificate(G: GammaFamily, indices, word_len: int, prefix_len: int,
                         tail_start: int, prox_horizon: int = 10 ** 4,
                         tol: Fraction = Fraction(1, 2 ** 10)) -> ScrambleCertificate:
    """Finite-prefix certificate for the pattern ``indices`` of the family.

    (a) for i in indices, every word of L_word_len(Sigma_{P_j}) occurs in y^(i)
        at a position >= tail_start;
    (b) for i not in indices, no two ones of y^(i) at positions >= tail_start are
        at a distance lying in P_j;
    (c) sampled points of Sigma_{P_j} come within tol of 0^inf along their orbits.
    Here j is the column realizing exactly ``indices``.
    """
    S = tuple(sorted(set(indices)))
    N = G.base.N
    if not S or S[0] < 1 or S[-1] > N:
        raise ValueError("indices must be a nonempty subset of 1..N")
    j = G.base.column_of(S)
    if j > G.decomposition.parts:
        raise ValueError(f"column {j} for {S} exceeds the {G.decomposition.parts} parts")
    Pj = G.decomposition.part(j)
    target = language(Pj, word_len)

    detail_a = {}
    ok_a = True
    for i in S:
        seen = omega_language(G.member(i), word_len, prefix_len, tail_start)
        missing = sorted(target - seen)
        detail_a[i] = {"missing": missing, "words": sorted(target)}
        ok_a &= not missing

    detail_b = {}
    ok_b = True
    mask = p_mask(Pj, prefix_len)
    for i in range(1, N + 1):
        if i in S:
            continue
        pos = [p for p in ones(G.member(i).prefix(prefix_len)) if p >= tail_start]
        bad = difference_mask(pos) & mask
        detail_b[i] = {"ones_in_tail": len(pos), "bad_distance": (bad & -bad).bit_length() - 1 if bad else None}
        ok_b &= not bad

    prox_horizon = min(prox_horizon, G.decomposition.horizon - 64)
    samples = {
        "transitive": transitive_point(Pj, max(word_len, 2), prox_horizon + 64),
        "one": SymbolStream.from_prefix("1"),
        "zero": SymbolStream.constant("0"),
    }
    detail_c = {}
    ok_c = True
    for name, z in samples.items():
        est = proximality_estimate(Pj, z, prox_horizon)
        detail_c[name] = est.value
        ok_c &= est.value <= tol

    clauses = [ClauseResult("a", ok_a, detail_a), ClauseResult("b", ok_b, detail_b),
               ClauseResult("c", ok_c, detail_c)]
    return ScrambleCertificate(S, j, clauses)


def certifiable_patterns(G: GammaFamily) -> list[tuple[int, ...]]:
    """Patterns whose column lies within the decomposition's parts."""
    return [S for S in G.base.columns[:G.decomposition.parts]]


def members_in_shift(G: GammaFamily, prefix_len: int) -> list[bool]:
    P = G.decomposition.source
    return [is_member(y.prefix(prefix_len), Q) and is_member(y.prefix(prefix_len), P)
            for y, Q in zip(G.members, G.q_sets)]
