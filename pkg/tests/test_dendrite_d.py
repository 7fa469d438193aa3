import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from chaoslab import dendrite_d as dd
from chaoslab.dendrite_d import A, Base, Spike

from oracles import planar_path_length, uniform_grid_point


def test_multiplier_tables():
    p = dd.GridParams()
    assert [p.m(i) for i in range(5)] == [1, 1, 6, 108, 24408]
    assert [p.L(i) for i in range(5)] == [1, 2, 24, 3024, 74493216]
    assert [p.l(i) for i in range(4)] == [1, 3, 27, 3051]
    assert dd.GridParams(scale=2).policy == "scaled-2"
    with pytest.raises(ValueError):
        dd.GridParams(scale=0)


def test_grid_is_uniform(grid):
    for n in range(4):
        X = grid.merged(n)
        assert X == [uniform_grid_point(grid.l(n), j) for j in range(grid.l(n) + 2)]
    assert grid.level_points(1) == [Fraction(1, 4), Fraction(3, 4)]


def test_lazy_level_matches_uniform(grid):
    l4 = grid.l(4)
    rng = random.Random(0)
    for _ in range(200):
        j = rng.randrange(0, l4 + 2)
        assert grid.x(4, j) == uniform_grid_point(l4, j)
    assert grid.z(4, 1) == Fraction(1, l4 + 1)


def test_materialization_cap():
    with pytest.raises(ValueError):
        dd.build_grid(4)


def test_first_steps(grid):
    o = dd.orbit(dd.START, 3, grid)
    assert [(dd.x_of(p, grid), p.y) for p in o.points[1:]] == [
        (Fraction(3, 4), Fraction(1, 2)), (Fraction(1, 4), Fraction(1, 2)), (Fraction(1, 28), Fraction(1, 4))]


def test_top_orbit_closed_form(grid):
    o = dd.orbit(dd.START, 3200, grid)
    assert all(dd.top_orbit_point(t, grid) == p for t, p in enumerate(o.points))


def test_base_is_fixed(grid):
    assert dd.apply_f(Base(Fraction(1, 3)), grid) == Base(Fraction(1, 3))


def test_map_is_continuous_at_band_edges(grid):
    for n in range(3):
        top = Fraction(1, 2 ** n)
        for k in (1, grid.L(n)):
            low = dd.apply_f(Spike(n, k, top / 2), grid)
            assert low == Base(grid.z(n, k))
            hi = dd.apply_f(Spike(n, k, 3 * top / 4), grid)
            assert isinstance(hi, Base)


def test_spike_reaches_base(grid):
    p = Spike(0, 1, Fraction(9, 10))
    r, q = dd.fixity_time(p, grid, 50)
    assert isinstance(q, Base)
    bound = p.n + dd.fixity_bound(p)
    assert r <= bound


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 3), st.integers(1, 1023))
def test_fixity_bound(n, num):
    grid = dd.build_grid()
    k = 1 + (num * 7919) % grid.L(n)
    p = Spike(n, k, Fraction(num, 1024) / 2 ** n)
    r, _ = dd.fixity_time(p, grid, 64)
    assert r is not None and r <= n + dd.fixity_bound(p)


def test_dist_against_path_oracle(grid):
    rng = random.Random(1)
    for _ in range(300):
        a, b = dd.sample_point(rng, grid), dd.sample_point(rng, grid)
        pa = (dd.x_of(a, grid), dd.y_of(a), (a.n, a.k) if isinstance(a, Spike) else None)
        pb = (dd.x_of(b, grid), dd.y_of(b), (b.n, b.k) if isinstance(b, Spike) else None)
        assert dd.dist_d(a, b, grid) == planar_path_length(pa, pb)
        assert dd.dist_planar_max(a, b, grid) <= dd.dist_d(a, b, grid)


def test_wn(grid):
    for n in range(3):
        r = dd.wn_certificate(n, grid)
        assert r.passed and r.max_dist <= r.w
    assert dd.wn_certificate(0, grid).per_corner_max == {"(0,0)": Fraction(3, 4), "(1,0)": Fraction(5, 4)}
    assert dd.wn_certificate(2, grid).target == "(1,0)"


def test_dc1_blocks(grid):
    rows = {(r.corner, r.n): r for r in dd.dc1_blocks((2, 3), grid)}
    assert (rows["(0,0)", 2].far_count, rows["(0,0)", 2].horizon) == (6, 135)
    assert (rows["(0,0)", 3].near_count, rows["(0,0)", 3].horizon) == (24408, 27459)
    assert (rows["(1,0)", 2].far_count, rows["(1,0)", 2].near_count) == (114, 108)
    assert (rows["(1,0)", 3].far_count, rows["(1,0)", 3].near_count) == (1140, 0)
    assert rows["(0,0)", 2].parity == "far" and rows["(0,0)", 3].parity == "near"
    assert rows["(1,0)", 2].parity == "near" and rows["(1,0)", 3].parity == "far"


def test_asymptotics(grid):
    y = dd.apply_f(dd.START, grid)
    assert dd.asymptotics_check(dd.START, y, Fraction(1, 2), 200, grid).s == 26
    assert dd.asymptotics_check(dd.START, y, Fraction(1, 8), 4000, grid).status == "inconclusive"
    r = dd.asymptotics_check(Spike(0, 1, Fraction(9, 10)), y, Fraction(1, 2), 50, grid)
    assert r.status == "eventually-fixed"


def test_budget(grid):
    with pytest.raises(dd.BudgetExceeded):
        dd.orbit(dd.START, 100, grid, dd.Budget(10))


def test_no_ly_triples(grid):
    reps = dd.no_infinite_ly_certificate(dd.sample_triples(30, grid, 5), grid)
    assert all(r.passed for r in reps)
    two_tops = dd.no_infinite_ly_certificate([(A(1, 1), A(2, 3), Base(Fraction(1, 2)))], grid, 200)
    assert two_tops[0].relation == "asymptotic"


def test_continuity_probe(grid):
    rng = random.Random(2)
    for _ in range(40):
        p = dd.sample_point(rng, grid, 2)
        for eps in (Fraction(1, 16), Fraction(1, 64)):
            ok, worst = dd.continuity_probe(p, eps, grid, 2)
            assert ok, (p, eps, worst)


def test_invalid_points(grid):
    with pytest.raises(dd.InvalidPoint):
        Spike(1, 1, Fraction(3, 4))
    with pytest.raises(dd.InvalidPoint):
        dd.validate(Spike(1, 3, Fraction(1, 4)), grid)
