from fractions import Fraction

from hypothesis import given, settings, strategies as st

from chaoslab.chaos_metrics import (classify_shift_pair, dc3_density_criterion, distribution,
                                    is_eventually_periodic_proxy, ly_classify, omega_language,
                                    reduce_to_zero, separated_count, shift_breakpoints,
                                    shift_distribution, shift_source, verdict_from_profile)
from chaoslab.core_words import SymbolStream, horizon_schedule

from oracles import dense_grid_distribution, dense_verdict

ZERO = SymbolStream.constant("0")
ALT = SymbolStream.periodic("10")
# ones on [4^j, 2*4^j): the density of ones oscillates between 1/3 and 2/3
OSC = SymbolStream.from_rule(lambda i: "1" if (i.bit_length() - 1) % 2 == 0 else "0", "osc")


def test_zero_vs_alternating():
    p = shift_distribution(ZERO, ALT, 4, 256, 3)
    assert p.values[Fraction(1, 2)] == Fraction(1, 2)
    assert p.values[Fraction(1, 4)] == 0
    assert p.values[Fraction(1)] == 1


def test_shift_distribution_matches_generic():
    src = shift_source(8)
    bps = shift_breakpoints(8)
    a = shift_distribution(OSC, ZERO, 8, 300, 3)
    b = distribution(src, (OSC, 0), (ZERO, 0), 300, bps, 3)
    for t in bps:
        assert a.values[t] == b.values[t]
        assert a.lower[t] == b.lower[t] and a.upper[t] == b.upper[t]


def test_distribution_against_metric_oracle():
    ts = shift_breakpoints(6)
    _, F = dense_grid_distribution(OSC, ALT, ts, 200, 6)
    p = shift_distribution(OSC, ALT, 6, 200, 0)
    for t in ts:
        assert p.values[t] == F[t]


def test_oscillating_pair_is_dc3():
    v = classify_shift_pair(ZERO, OSC, 4, 4096)
    assert v.classification == "DC3-evidence"
    assert v.witness["max_gap"] >= Fraction(1, 8)
    assert v.witness["k"] >= 1
    assert dense_verdict(ZERO, OSC, 4, horizon_schedule(1024, 3))[0] == "DC3-evidence"


def test_identical_streams_not_dc3():
    v = classify_shift_pair(OSC, OSC, 6, 512)
    assert v.classification == "no-DC3-at-resolution"
    assert v.witness["max_gap"] == 0


def test_verdict_dc1_from_synthetic_profile():
    from chaoslab.chaos_metrics import DistributionProfile
    t = Fraction(1, 2)
    P = DistributionProfile(8, (t, Fraction(1)), (4, 8), {}, {t: 1, 1: 1},
                            {t: Fraction(0), Fraction(1): Fraction(1)},
                            {t: Fraction(1), Fraction(1): Fraction(1)})
    assert verdict_from_profile(P).classification == "DC1-evidence"


def test_ly_and_entropy():
    src = shift_source(16)
    assert ly_classify(src, (ZERO, 0), (ALT, 0), 256).classification == "no-LY-evidence"
    far = SymbolStream.from_prefix("1" * 8)
    assert ly_classify(src, (ZERO, 0), (far, 0), 64).classification == "asymptotic-evidence"
    sample = [(SymbolStream.from_prefix(format(i, "04b")), 0) for i in range(16)]
    # separated iff two prefixes differ within the first n + k - 1 symbols, t = 2^-k
    assert separated_count(src, sample, 3, Fraction(1, 2)).count == 1
    assert separated_count(src, sample, 3, Fraction(1, 4)).count == 8
    assert separated_count(src, sample, 3, Fraction(1, 8)).count == 16


def test_omega_language_and_period():
    x = SymbolStream.periodic("1000000000", "11")
    assert omega_language(x, 2, 200, 50) == {"10", "00", "01"}
    assert is_eventually_periodic_proxy(x, 200, 20) == 10


streams = st.text(alphabet="01", min_size=1, max_size=30).map(lambda w: SymbolStream.from_prefix(w))


@settings(max_examples=40, deadline=None)
@given(streams, streams, st.integers(2, 5))
def test_density_chain_and_reduction(x, y, l):
    chain = dc3_density_criterion(x, y, 128)
    assert chain.holds
    red = reduce_to_zero(x, y, l, 128)
    assert red.holds


@settings(max_examples=15, deadline=None)
@given(st.text(alphabet="01", min_size=4, max_size=12), st.text(alphabet="01", min_size=4, max_size=12))
def test_breakpoint_equals_dense_oracle(a, b):
    x, y = SymbolStream.periodic(a), SymbolStream.periodic(b)
    sched = horizon_schedule(256, 3)
    v = classify_shift_pair(x, y, 5, 256, 3)
    cls, gap = dense_verdict(x, y, 5, sched)
    assert v.classification == cls
    assert v.witness["max_gap"] == gap
