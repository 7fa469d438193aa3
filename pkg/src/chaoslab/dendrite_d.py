"""A comb-like dendrite in the unit square and a map on it with a DC1 pair but no
infinite Li-Yorke scrambled set.

The dendrite is the base segment [0,1] x {0} together with vertical spikes of
height 2^-n standing on the level-n grid points z^(n)_1 < ... < z^(n)_{L_n}.
Level n+1 splits every gap of the level-n grid into m_{n+1}+1 equal pieces.
The map pushes the top of each spike to the top of the next spike, marching
right on even levels and left on odd levels, and collapses everything else
onto the base, which is fixed pointwise.

All arithmetic is exact (``fractions.Fraction``).  Grid levels up to a small
depth are stored; deeper grid points are computed on demand from their gap
index, so a level with ~10^8 points never needs to be built.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .chaos_metrics import OrbitSource, PairVerdict

MATERIALIZE_CAP = 3


class BudgetExceeded(RuntimeError):
    pass


class InvalidPoint(ValueError):
    pass


# ---------------------------------------------------------------- grid

@dataclass(frozen=True)
class GridParams:
    """Multipliers m_0 = 1, m_{i+1} = scale * 2^i * l_i (scale = 1 is the minimal policy)."""
    scale: int = 1
    levels: int = 8

    def __post_init__(self):
        if self.scale < 1:
            raise ValueError("scale >= 1 keeps m_{i+1} >= 2^i l_i")

    @property
    def policy(self) -> str:
        return "minimal" if self.scale == 1 else f"scaled-{self.scale}"

    @property
    def table(self) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
        return _tables(self.scale, self.levels)

    def m(self, i: int) -> int:
        return self.table[0][i]

    def L(self, i: int) -> int:
        return self.table[1][i]

    def l(self, i: int) -> int:
        return 0 if i < 0 else self.table[2][i]


@lru_cache(maxsize=None)
def _tables(scale: int, levels: int):
    m, L, l = [1], [], []
    prev = 0  # l_{-1}
    for i in range(levels):
        if i > 0:
            m.append(scale * 2 ** (i - 1) * l[i - 1])
        L.append((prev + 1) * m[i])
        prev += L[i]
        l.append(prev)
    return tuple(m), tuple(L), tuple(l)


class Grid:
    """Exact grid points.  ``z(n, k)`` is z^(n)_k (1 <= k <= L_n); ``x(n, j)`` is the
    j-th point of the merged level-n grid, x(n, 0) = 0 and x(n, l_n + 1) = 1.

    Levels 0..depth are stored; deeper points come from the recurrence
        z^(n)_{i m_n + r} = x^(n-1)_i + r/(m_n+1) (x^(n-1)_{i+1} - x^(n-1)_i)
    and the interleaving x^(n)_{i(m_n+1)} = x^(n-1)_i.
    """

    def __init__(self, params: GridParams | None = None, depth: int = MATERIALIZE_CAP,
                 cap: int = MATERIALIZE_CAP):
        if depth > cap:
            raise ValueError(f"depth {depth} exceeds materialization cap {cap}")
        self.params = params or GridParams()
        self.depth = depth
        self._Z: list[list[Fraction]] = []
        self._X: list[list[Fraction]] = []
        prev = [Fraction(0), Fraction(1)]
        for n in range(depth + 1):
            mn = self.params.m(n)
            Z, X = [], []
            for i in range(len(prev) - 1):
                a, b = prev[i], prev[i + 1]
                X.append(a)
                for r in range(1, mn + 1):
                    z = a + Fraction(r, mn + 1) * (b - a)
                    Z.append(z)
                    X.append(z)
            X.append(prev[-1])
            self._Z.append(Z)
            self._X.append(X)
            prev = X
        self._lazy_z = lru_cache(maxsize=1 << 16)(self._z_from_recurrence)

    def L(self, n: int) -> int:
        return self.params.L(n)

    def l(self, n: int) -> int:
        return self.params.l(n)

    def m(self, n: int) -> int:
        return self.params.m(n)

    def level_points(self, n: int) -> list[Fraction]:
        if n > self.depth:
            raise ValueError(f"level {n} is not materialized (depth {self.depth})")
        return list(self._Z[n])

    def merged(self, n: int) -> list[Fraction]:
        if n > self.depth:
            raise ValueError(f"level {n} is not materialized (depth {self.depth})")
        return list(self._X[n])

    def z(self, n: int, k: int) -> Fraction:
        if not 1 <= k <= self.L(n):
            raise IndexError(f"z^({n})_{k} outside 1..{self.L(n)}")
        if n <= self.depth:
            return self._Z[n][k - 1]
        return self._lazy_z(n, k)

    def _z_from_recurrence(self, n: int, k: int) -> Fraction:
        mn = self.m(n)
        i, r = divmod(k - 1, mn)
        r += 1
        a, b = self.x(n - 1, i), self.x(n - 1, i + 1)
        return a + Fraction(r, mn + 1) * (b - a)

    def x(self, n: int, j: int) -> Fraction:
        if n < 0:
            if j not in (0, 1):
                raise IndexError("level -1 has only the endpoints 0 and 1")
            return Fraction(j)
        if not 0 <= j <= self.l(n) + 1:
            raise IndexError(f"x^({n})_{j} outside 0..{self.l(n) + 1}")
        if n <= self.depth:
            return self._X[n][j]
        i, r = divmod(j, self.m(n) + 1)
        if r == 0:
            return self.x(n - 1, i)
        return self.z(n, i * self.m(n) + r)


def build_grid(depth: int = MATERIALIZE_CAP, params: GridParams | None = None,
               cap: int = MATERIALIZE_CAP) -> Grid:
    return Grid(params, depth, cap)


# ---------------------------------------------------------------- points

@dataclass(frozen=True)
class Base:
    x: Fraction

    def __post_init__(self):
        if not 0 <= self.x <= 1:
            raise InvalidPoint("base point outside [0,1]")


@dataclass(frozen=True)
class Spike:
    """Point at height y in (0, 2^-n] on the spike above z^(n)_k."""
    n: int
    k: int
    y: Fraction

    def __post_init__(self):
        if self.n < 0 or self.k < 1:
            raise InvalidPoint("spike indices out of range")
        if not 0 < self.y <= Fraction(1, 2 ** self.n):
            raise InvalidPoint(f"height {self.y} outside (0, 2^-{self.n}]")

    @property
    def is_top(self) -> bool:
        return self.y == Fraction(1, 2 ** self.n)


DPoint = Base | Spike


def A(n: int, k: int) -> Spike:
    """Top of the spike above z^(n)_k."""
    return Spike(n, k, Fraction(1, 2 ** n))


START = A(0, 1)


def spike(n: int, k: int, y: Fraction) -> DPoint:
    return Spike(n, k, y)


def x_of(pt: DPoint, grid: Grid) -> Fraction:
    return pt.x if isinstance(pt, Base) else grid.z(pt.n, pt.k)


def y_of(pt: DPoint) -> Fraction:
    return Fraction(0) if isinstance(pt, Base) else pt.y


def validate(pt: DPoint, grid: Grid) -> DPoint:
    if isinstance(pt, Spike) and pt.k > grid.L(pt.n):
        raise InvalidPoint(f"spike index {pt.k} exceeds L_{pt.n} = {grid.L(pt.n)}")
    return pt


def _land(n: int, k: int, y: Fraction, grid: Grid) -> DPoint:
    if y == 0:
        return Base(grid.z(n, k))
    return Spike(n, k, y)


def apply_f(pt: DPoint, grid: Grid) -> DPoint:
    """One step of the map.

    Upper quarter y >= 3*2^-(n+2): rescale by phi(y) = 4(y - 3*2^-(n+2)) and move
    to the next spike (right on even levels, left on odd levels; past the last
    one, to the first spike of level n+1 with height phi(y)/2).
    Middle band 2^-(n+1) <= y < 3*2^-(n+2): land on the base, linearly between
    the foot of this spike and the foot of the spike the top goes to.
    Lower part y < 2^-(n+1): drop to the foot of the spike.  Base is fixed.
    """
    if isinstance(pt, Base):
        return pt
    n, k, y = pt.n, pt.k, pt.y
    Ln = grid.L(n)
    if k > Ln:
        raise InvalidPoint(f"spike index {k} exceeds L_{n} = {Ln}")
    top = Fraction(1, 2 ** n)
    upper = 3 * top / 4
    half = top / 2
    even = n % 2 == 0
    if even:
        nxt = (n, k + 1) if k != Ln else (n + 1, grid.L(n + 1))
    else:
        nxt = (n, k - 1) if k != 1 else (n + 1, 1)
    if y >= upper:
        phi = 4 * (y - upper)
        if nxt[0] == n:
            return _land(n, nxt[1], phi, grid)
        return _land(nxt[0], nxt[1], phi / 2, grid)
    if y >= half:
        frac = (y - half) / (top / 4)
        a, b = grid.z(n, k), grid.z(*nxt)
        return Base(a + frac * (b - a))
    return Base(grid.z(n, k))


def dist_d(a: DPoint, b: DPoint, grid: Grid) -> Fraction:
    """Arclength along the dendrite."""
    if isinstance(a, Spike) and isinstance(b, Spike) and (a.n, a.k) == (b.n, b.k):
        return abs(a.y - b.y)
    return y_of(a) + abs(x_of(a, grid) - x_of(b, grid)) + y_of(b)


def dist_planar_max(a: DPoint, b: DPoint, grid: Grid) -> Fraction:
    """Max-coordinate distance in the square (dominated by the arclength)."""
    return max(abs(x_of(a, grid) - x_of(b, grid)), abs(y_of(a) - y_of(b)))


def source(grid: Grid) -> OrbitSource:
    return OrbitSource(lambda p: apply_f(p, grid), lambda a, b: dist_d(a, b, grid),
                       Fraction(3), "dendrite-D")


# ---------------------------------------------------------------- orbits

@dataclass
class Budget:
    """Shared cap on the number of map iterations."""
    total: int | None = None
    used: int = 0

    def charge(self, n: int = 1):
        self.used += n
        if self.total is not None and self.used > self.total:
            raise BudgetExceeded(f"iterate budget {self.total} exceeded")


@dataclass
class Orbit:
    points: list  # x, f(x), ..., f^steps(x)
    itinerary: list  # (n, k) for spike points, None on the base

    def __getitem__(self, i):
        return self.points[i]

    def __len__(self):
        return len(self.points)

    def first_base(self) -> int | None:
        for i, p in enumerate(self.points):
            if isinstance(p, Base):
                return i
        return None


def orbit(start: DPoint, steps: int, grid: Grid, budget: Budget | None = None) -> Orbit:
    validate(start, grid)
    pts = [start]
    it = [(start.n, start.k) if isinstance(start, Spike) else None]
    p = start
    for _ in range(steps):
        if budget is not None:
            budget.charge()
        p = apply_f(p, grid)
        pts.append(p)
        it.append((p.n, p.k) if isinstance(p, Spike) else None)
    return Orbit(pts, it)


def top_orbit_point(t: int, grid: Grid) -> Spike:
    """f^t(1/2, 1) in closed form: level n is visited during steps l_{n-1} <= t < l_n,
    left to right on even levels and right to left on odd levels, always at the top."""
    n = 0
    while grid.l(n) <= t:
        n += 1
    p = t - grid.l(n - 1)
    k = p + 1 if n % 2 == 0 else grid.L(n) - p
    return A(n, k)


def level_finish_steps(n_max: int, grid: Grid, budget: Budget | None = None) -> list[int]:
    """Simulated step count at which the top orbit first leaves level n, n = 0..n_max."""
    out = []
    p, t, cur = START, 0, 0
    while len(out) <= n_max:
        if budget is not None:
            budget.charge()
        p = apply_f(p, grid)
        t += 1
        if not isinstance(p, Spike):
            raise AssertionError("top orbit reached the base")
        while p.n > cur:
            out.append(t)
            cur += 1
    return out[:n_max + 1]


# ---------------------------------------------------------------- certificates

def w_bound(n: int, grid: Grid) -> Fraction:
    return Fraction(1, grid.l(n) + 1) + Fraction(1, 2 ** n)


CORNERS = {"(0,0)": Base(Fraction(0)), "(1,0)": Base(Fraction(1))}


@dataclass(frozen=True)
class WnResult:
    n: int
    target: str
    w: Fraction
    max_dist: Fraction
    per_corner_max: dict
    passed: bool
    violating_j: int | None = None


def wn_certificate(n: int, grid: Grid, target: str | None = None,
                   budget: Budget | None = None) -> WnResult:
    """dist(f^(l_n + j)(1/2, 1), corner) <= w_n for j = 1..m_{n+1}.

    Without an explicit target, the corner with the smaller maximum over the
    block is used; both maxima are reported.
    """
    ln, m_next = grid.l(n), grid.m(n + 1)
    orb = orbit(START, ln + m_next, grid, budget)
    block = orb.points[ln + 1: ln + m_next + 1]
    per = {name: max(dist_d(p, c, grid) for p in block) for name, c in CORNERS.items()}
    tgt = target or min(per, key=lambda s: (per[s], s))
    w = w_bound(n, grid)
    bad = None
    for j, p in enumerate(block, start=1):
        if dist_d(p, CORNERS[tgt], grid) > w:
            bad = j
            break
    return WnResult(n, tgt, w, per[tgt], per, bad is None, bad)


@dataclass(frozen=True)
class Dc1Block:
    n: int
    horizon: int  # l_n + m_{n+1}
    corner: str
    far_count: int  # iterates i < horizon with dist < 1/2
    near_count: int  # iterates i < horizon with dist < w_n
    w: Fraction

    @property
    def far_fraction(self) -> Fraction:
        return Fraction(self.far_count, self.horizon)

    @property
    def near_fraction(self) -> Fraction:
        return Fraction(self.near_count, self.horizon)

    @property
    def far_bound(self) -> Fraction:
        return Fraction(1, 2 ** self.n)

    @property
    def parity(self) -> str:
        """'far' when at most l_n iterates come within 1/2, 'near' when at least m_{n+1} come within w_n."""
        if self.far_count * 2 ** self.n <= self.horizon:
            return "far"
        if self.near_count * 2 ** self.n >= (2 ** self.n - 1) * self.horizon:
            return "near"
        return "neither"


def dc1_blocks(ns: Sequence[int], grid: Grid, corners: Iterable[str] = ("(0,0)", "(1,0)"),
               budget: Budget | None = None) -> list[Dc1Block]:
    H = max(grid.l(n) + grid.m(n + 1) for n in ns)
    orb = orbit(START, H - 1, grid, budget)
    out = []
    half = Fraction(1, 2)
    for c in corners:
        d = [dist_d(p, CORNERS[c], grid) for p in orb.points]
        for n in ns:
            h = grid.l(n) + grid.m(n + 1)
            w = w_bound(n, grid)
            out.append(Dc1Block(n, h, c, sum(1 for v in d[:h] if v < half),
                                sum(1 for v in d[:h] if v < w), w))
    return out


def dc1_certificate(ns: Sequence[int], grid: Grid, corner: str = "(0,0)",
                    budget: Budget | None = None) -> PairVerdict:
    """DC1 evidence for ((1/2,1), corner): some block where the closeness fraction
    within 1/2 is <= 2^-n, and some block where it is >= 1 - 2^-n within w_n."""
    rows = dc1_blocks(ns, grid, (corner,), budget)
    far = [r for r in rows if r.parity == "far"]
    near = [r for r in rows if r.parity == "near"]
    witness = {"corner": corner, "blocks": rows,
               "far": [(r.n, r.far_fraction) for r in far],
               "near": [(r.n, r.near_fraction) for r in near]}
    cls = "DC1-evidence" if far and near else "no-DC1-at-resolution"
    return PairVerdict(cls, witness, tuple(r.horizon for r in rows))


@dataclass(frozen=True)
class AsymptoticsResult:
    status: str  # "asymptotic" | "eventually-fixed" | "inconclusive"
    s: int | None
    budget: int
    last_distance: Fraction
    fixed_at: tuple = ()


def asymptotics_check(x: DPoint, y: DPoint, eps: Fraction, steps: int, grid: Grid,
                      min_window: int | None = None, budget: Budget | None = None) -> AsymptoticsResult:
    """Least s with dist(f^r x, f^r y) < eps for every r in [s, steps].

    If either orbit lands on the base the pair is reported as eventually fixed.
    The answer is inconclusive when the trailing window [s, steps] is shorter
    than ``min_window`` (default steps // 4).
    """
    eps = Fraction(eps)
    win = steps // 4 if min_window is None else min_window
    s = 0
    a, b = x, y
    d = dist_d(a, b, grid)
    for r in range(steps + 1):
        if r:
            if budget is not None:
                budget.charge(2)
            a, b = apply_f(a, grid), apply_f(b, grid)
            d = dist_d(a, b, grid)
        if isinstance(a, Base) or isinstance(b, Base):
            fx = tuple(i for i, p in enumerate((a, b)) if isinstance(p, Base))
            return AsymptoticsResult("eventually-fixed", None, steps, d, (r, fx))
        if d >= eps:
            s = r + 1
    if steps - s + 1 < max(win, 1):
        return AsymptoticsResult("inconclusive", None, steps, d)
    return AsymptoticsResult("asymptotic", s, steps, d)


def fixity_time(pt: DPoint, grid: Grid, steps: int, budget: Budget | None = None):
    """(first step on the base, base point) or (None, last point) when the orbit
    stays off the base for ``steps`` iterations."""
    p = pt
    for r in range(steps + 1):
        if isinstance(p, Base):
            return r, p
        if r < steps:
            if budget is not None:
                budget.charge()
            p = apply_f(p, grid)
    return None, p


def fixity_bound(pt: Spike) -> int:
    """Steps within which a spike point below the top reaches the base: the gap to
    the top grows fourfold (relative to the spike height) per step."""
    top = Fraction(1, 2 ** pt.n)
    ratio = top / (top - pt.y)
    return math.ceil(math.log(ratio, 4) - 1e-12) + 2 if ratio > 1 else 1


@dataclass(frozen=True)
class TripleReport:
    points: tuple
    fixed: tuple  # (step, Base) or (None, point) per point
    unfixed: int
    pair: tuple | None  # indices of the witnessing pair
    relation: str  # "eventually-equal" | "eventually-constant-positive" | "asymptotic" | "none"
    distance: Fraction | None

    @property
    def passed(self) -> bool:
        return self.relation in ("eventually-equal", "eventually-constant-positive")


def no_infinite_ly_certificate(triples: Sequence[tuple], grid: Grid, steps: int = 4096,
                               budget: Budget | None = None) -> list[TripleReport]:
    """For each triple, find two orbits that both settle on the base: their distance
    is then constant, zero when they settle on the same point."""
    out = []
    for tri in triples:
        fx = tuple(fixity_time(p, grid, steps, budget) for p in tri)
        settled = [i for i, (r, _) in enumerate(fx) if r is not None]
        unfixed = len(tri) - len(settled)
        if len(settled) >= 2:
            i, j = settled[0], settled[1]
            d = abs(fx[i][1].x - fx[j][1].x)
            rel = "eventually-equal" if d == 0 else "eventually-constant-positive"
            out.append(TripleReport(tuple(tri), fx, unfixed, (i, j), rel, d))
        else:
            # two orbits stay on the top of the spikes: same orbit up to a lag
            out.append(TripleReport(tuple(tri), fx, unfixed, None,
                                    "asymptotic" if unfixed >= 2 else "none", None))
    return out


def sample_point(rng: random.Random, grid: Grid, max_level: int = 3,
                 allow_top: bool = True) -> DPoint:
    kind = rng.random()
    if kind < 0.3:
        return Base(Fraction(rng.randrange(0, 1025), 1024))
    n = rng.randrange(0, max_level + 1)
    k = rng.randrange(1, grid.L(n) + 1)
    top = Fraction(1, 2 ** n)
    if allow_top and kind > 0.85:
        return Spike(n, k, top)
    y = top * Fraction(rng.randrange(1, 1024), 1024)
    return Spike(n, k, y)


def sample_triples(count: int, grid: Grid, seed: int = 0, max_level: int = 3) -> list[tuple]:
    """Seeded triples of distinct points with at most one top-of-spike point each."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        tri = []
        tops = 0
        while len(tri) < 3:
            p = sample_point(rng, grid, max_level, allow_top=tops == 0)
            if p in tri:
                continue
            tops += isinstance(p, Spike) and p.is_top
            tri.append(p)
        out.append(tuple(tri))
    return out


def continuity_probe(pt: DPoint, eps: Fraction, grid: Grid, max_level: int = 3) -> tuple[bool, Fraction]:
    """Check dist(f(p), f(q)) <= eps for a finite set of q within delta = eps/8 of p.

    Neighbours: points on the same spike, and when the spike foot is within
    reach, base points and low points on spikes of level <= max_level whose foot
    is within the remaining distance.
    """
    eps = Fraction(eps)
    delta = eps / 8
    fp = apply_f(pt, grid)
    nbrs: list[DPoint] = []
    x0, y0 = x_of(pt, grid), y_of(pt)
    for s in (-delta, -delta / 2, delta / 2, delta):
        yy = y0 + s
        if isinstance(pt, Spike) and 0 < yy <= Fraction(1, 2 ** pt.n):
            nbrs.append(Spike(pt.n, pt.k, yy))
    if y0 < delta:
        rem = delta - y0
        for s in (-rem, -rem / 2, rem / 2, rem):
            if 0 <= x0 + s <= 1:
                nbrs.append(Base(x0 + s))
        for n in range(max_level + 1):
            for k in range(1, grid.L(n) + 1):
                dx = abs(grid.z(n, k) - x0)
                if dx < rem and (not isinstance(pt, Spike) or (n, k) != (pt.n, pt.k)):
                    h = min(rem - dx, Fraction(1, 2 ** n))
                    if h > 0:
                        nbrs.append(Spike(n, k, h))
    worst = Fraction(0)
    for q in nbrs:
        d = dist_d(fp, apply_f(q, grid), grid)
        worst = max(worst, d)
    return worst <= eps, worst
