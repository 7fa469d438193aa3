"""The Gehman dendrite as a binary tree of arcs with its endpoints, the self-map g,
and the subdendrite spanned by the codes of a subshift.

The arc with address i_1...i_n joins the branch point of i_1...i_{n-1} to the
branch point of i_1...i_n and has length 2^-n, so every endpoint lies at
arclength exactly 1 from the root.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .core_words import SymbolStream, Word, common_prefix_length
from .chaos_metrics import OrbitSource


class IndistinguishableEndpoints(ValueError):
    pass


class InvalidPoint(ValueError):
    pass


@dataclass(frozen=True)
class Root:
    def __repr__(self):
        return "Root"


@dataclass(frozen=True)
class ArcPoint:
    """Point at parameter t in (0, 1] along the arc ``address``; t = 1 is the branch point."""
    address: Word
    t: Fraction

    def __post_init__(self):
        if not self.address:
            raise InvalidPoint("arc address must be nonempty")
        if not 0 < self.t <= 1:
            raise InvalidPoint("arc parameter must lie in (0, 1]")

    @property
    def depth(self) -> int:
        return len(self.address)


@dataclass(frozen=True)
class EndPoint:
    """Endpoint with code sigma^offset(code)."""
    code: SymbolStream
    offset: int = 0

    def prefix(self, n: int) -> Word:
        return self.code.window(self.offset + 1, self.offset + 1 + n)


GehmanPoint = Root | ArcPoint | EndPoint


def branch_point(address: Word) -> GehmanPoint:
    return ArcPoint(address, Fraction(1)) if address else Root()


def height(pt: GehmanPoint) -> Fraction:
    """Arclength from the root."""
    if isinstance(pt, Root):
        return Fraction(0)
    if isinstance(pt, EndPoint):
        return Fraction(1)
    n = pt.depth
    return 1 - Fraction(1, 2 ** (n - 1)) + pt.t * Fraction(1, 2 ** n)


def apply_g(pt: GehmanPoint) -> GehmanPoint:
    if isinstance(pt, Root):
        return pt
    if isinstance(pt, EndPoint):
        return EndPoint(pt.code, pt.offset + 1)
    if pt.depth == 1:
        return Root()
    return ArcPoint(pt.address[1:], pt.t)


def _path_word(pt: GehmanPoint, horizon: int) -> Word:
    if isinstance(pt, Root):
        return ""
    if isinstance(pt, EndPoint):
        return pt.prefix(horizon)
    return pt.address


def dist(a: GehmanPoint, b: GehmanPoint, code_horizon: int = 256) -> Fraction:
    """Arclength of the path from a to b: h(a) + h(b) - 2 h(a ∧ b).

    Endpoint codes are compared on ``code_horizon`` symbols; two endpoints whose
    codes agree that far are reported, not guessed equal.
    """
    if isinstance(a, Root):
        return height(b)
    if isinstance(b, Root):
        return height(a)
    if isinstance(a, EndPoint) and isinstance(b, EndPoint):
        c = common_prefix_length(a.prefix(code_horizon), b.prefix(code_horizon))
        if c >= code_horizon:
            raise IndistinguishableEndpoints(f"codes agree on {code_horizon} symbols")
        return Fraction(2, 2 ** c)
    depth = max(len(p.address) for p in (a, b) if isinstance(p, ArcPoint))
    horizon = max(code_horizon, depth + 1)
    A, B = _path_word(a, horizon), _path_word(b, horizon)
    if isinstance(a, ArcPoint) and isinstance(b, ArcPoint) and A == B:
        return abs(a.t - b.t) * Fraction(1, 2 ** len(A))
    c = common_prefix_length(A, B)
    if c == len(A):  # a sits on the root path of b
        return height(b) - height(a)
    if c == len(B):
        return height(a) - height(b)
    return height(a) + height(b) - 2 * (1 - Fraction(1, 2 ** c))


def eventually_fixed(pt: GehmanPoint) -> int | None:
    """Steps until the orbit reaches the root, None for endpoints (never)."""
    if isinstance(pt, Root):
        return 0
    if isinstance(pt, EndPoint):
        return None
    return pt.depth


@dataclass
class GehmanSystem:
    """g restricted to the subdendrite D_X spanned by the codes of X."""
    x_contains: Callable[[Word], bool]
    code_horizon: int = 256
    label: str = ""

    def is_valid(self, pt: GehmanPoint) -> bool:
        if isinstance(pt, Root):
            return True
        if isinstance(pt, ArcPoint):
            return self.x_contains(pt.address)
        return self.x_contains(pt.prefix(self.code_horizon))

    def step(self, pt: GehmanPoint) -> GehmanPoint:
        if not self.is_valid(pt):
            raise InvalidPoint(f"{pt!r} is not in D_X")
        return apply_g(pt)

    def source(self) -> OrbitSource:
        return OrbitSource(apply_g, lambda a, b: dist(a, b, self.code_horizon), Fraction(2),
                           f"gehman[{self.label}]")


@dataclass(frozen=True)
class ConjugacyReport:
    commutes: bool
    order_agrees: bool
    checked_steps: int
    checked_triples: int
    first_failure: tuple | None = None

    @property
    def passed(self) -> bool:
        return self.commutes and self.order_agrees


def conjugacy_check(codes: list[SymbolStream], n_steps: int, horizon: int = 128) -> ConjugacyReport:
    """g^k(EndPoint(c)) and EndPoint(sigma^k c) agree for k <= n_steps, and the dendrite
    distance between endpoints orders pairs the same way as the shift metric."""
    for idx, c in enumerate(codes):
        pt = EndPoint(c)
        for k in range(n_steps + 1):
            want = c.shift(k).prefix(horizon) if k else c.prefix(horizon)
            if pt.prefix(horizon) != want:
                return ConjugacyReport(False, False, k, 0, (idx, k))
            pt = apply_g(pt)
    triples = 0
    for i in range(len(codes)):
        for j in range(len(codes)):
            for k in range(len(codes)):
                if len({i, j, k}) < 3:
                    continue
                a, b, c = codes[i], codes[j], codes[k]
                try:
                    dab = dist(EndPoint(a), EndPoint(b), horizon)
                    dac = dist(EndPoint(a), EndPoint(c), horizon)
                except IndistinguishableEndpoints:
                    continue
                rab = Fraction(1, 2 ** (common_prefix_length(a.prefix(horizon), b.prefix(horizon)) + 1))
                rac = Fraction(1, 2 ** (common_prefix_length(a.prefix(horizon), c.prefix(horizon)) + 1))
                triples += 1
                if (dab <= dac) != (rab <= rac):
                    return ConjugacyReport(True, False, n_steps, triples, (i, j, k))
    return ConjugacyReport(True, True, n_steps, triples)
