import pytest

from chaoslab.core_words import naturals, p_star
from chaoslab.omega_factory import (build_family, build_gamma, certifiable_patterns, members_in_shift,
                                    q_set, scramble_certificate, subset_schedule)
from chaoslab.spacing import thick_decompose


def test_subset_schedule_order():
    assert subset_schedule(3) == [(1, 2, 3), (1, 2), (1, 3), (2, 3), (1,), (2,), (3,)]


def test_family_columns_realize_each_subset():
    fam = build_family(3)
    assert fam.period == 7
    for S in fam.columns:
        c = fam.column_of(S)
        assert {i for i in range(1, 4) if fam.member(i).at(c) == "1"} == set(S)
        assert fam.member(1).at(c + fam.period) == fam.member(1).at(c)
    with pytest.raises(ValueError):
        build_family(1)


def test_q_set_unions_selected_parts():
    D = thick_decompose(p_star(), 3, 10 ** 5)
    fam = build_family(3)
    Q = q_set(fam.member(3), D)  # x^(3) selects columns 1 and 3
    want = sorted(D.part(1).enumerate_upto(10 ** 5) + D.part(3).enumerate_upto(10 ** 5))
    assert Q.enumerate_upto(10 ** 5) == want
    with pytest.raises(ValueError):
        Q.contains(10 ** 5 + 1)


@pytest.fixture(scope="module")
def gamma_pstar():
    return build_gamma(3, p_star(), 3, 3, 10 ** 5)


def test_gamma_pstar_members(gamma_pstar):
    G = gamma_pstar
    assert all(members_in_shift(G, 10 ** 5))
    ones = [[i + 1 for i, c in enumerate(y.prefix(10 ** 5)) if c == "1"] for y in G.members]
    assert ones == [[2, 6, 1030]] * 3


def test_gamma_pstar_certificates(gamma_pstar):
    for S in certifiable_patterns(gamma_pstar):
        c = scramble_certificate(gamma_pstar, S, 2, 10 ** 5, 1000)
        assert c.passed, c.failing()


def test_naturals_small_family_clause_a():
    # a short prefix: y^(2) places its few ones before the tail, so clause (a) fails for (1,2)
    G = build_gamma(2, naturals(), 2, 3, 2000)
    assert scramble_certificate(G, (1,), 2, 2000, 1000).passed
    assert scramble_certificate(G, (1, 2), 2, 2000, 1000).failing() == ["a"]


def test_naturals_three_members_pass():
    G = build_gamma(3, naturals(), 3, 3, 5000)
    for S in certifiable_patterns(G):
        assert scramble_certificate(G, S, 2, 5000, 2500).passed
