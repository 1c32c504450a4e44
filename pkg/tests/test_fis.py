from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from oracles import linear
from ultrafinite.arith import EXTRA_OPS, STANDARD_OPS, UNARY, Signature, UnfeasibleComputation, numeral
from ultrafinite.fis import (INF, Feasibility, Linear, NotStrict, Sharp, Shifted, StrongCut, SupportCut,
                             binary_closure_violation, check_fis, check_weak_closure,
                             check_weak_closure_values, classify, defuzzify, dominates, evaluate,
                             feasibility_radius, log_rescale, small_cut, table)

F = Fraction
PLUS2 = {"plus2": EXTRA_OPS["plus2"]}
PROP2 = table([(0, 1), (1, 1), (2, 1), (3, F(3, 4)), (4, F(1, 2))], 0)


def test_linear_examples():
    G = Linear(5)
    assert evaluate(G, 0) == 1
    assert evaluate(G, 2) == F(3, 5)
    assert evaluate(G, 7) == 0


def test_log_rescale_examples():
    G = Linear(5)
    assert evaluate(log_rescale(G), 8) == F(1, 5)
    assert evaluate(log_rescale(G), 0) == 1
    assert evaluate(log_rescale(G), 1) == evaluate(G, 1)


def test_small_cut_example():
    assert evaluate(small_cut(PROP2), 2) == F(1, 2)


@pytest.mark.parametrize("make,arg", [(Linear, 1), (Linear, 0), (Sharp, 0), (Sharp, 1)])
def test_degenerate_descriptors_rejected(make, arg):
    with pytest.raises(ValueError):
        make(arg)


def test_small_cut_pins_zero_but_can_jump():
    assert evaluate(small_cut(Linear(1000)), 0) == 1
    # G(4) = 1 and G(8) = 0: the small cut jumps between 2 and 3
    r = check_fis(small_cut(Shifted(Linear(2), 4)), 10)
    assert not r.is_fis and r.first_violation.condition == "no-jump"


@given(st.integers(2, 500), st.integers(0, 2000))
def test_linear_matches_closed_form(N, n):
    assert evaluate(Linear(N), n) == linear(N, n)
    assert (evaluate(Linear(N), n) == 0) == (n >= N)


def test_sharp_uses_tower():
    G = Sharp(3)  # 2_3 = 16
    assert evaluate(G, 0) == 1
    assert evaluate(G, 1) == 1 - F(2, 16)
    assert evaluate(G, 2) == 1 - F(4, 16)
    assert evaluate(G, 3) == 0
    with pytest.raises(UnfeasibleComputation):
        Sharp(6)


def test_shifted():
    G = Shifted(Linear(4), 10)
    assert [evaluate(G, n) for n in (0, 10, 11, 14)] == [1, 1, F(3, 4), 0]


def test_check_fis_examples():
    r = check_fis(Linear(5), 10)
    assert (r.is_fis, r.is_strict, r.is_regular) == (True, True, True)
    assert check_fis(table([(0, 1), (1, 1)], 1), 10).is_strict is False
    bad = check_fis(table([(0, 1), (1, 0)], 0), 2)
    assert not bad.is_fis
    assert bad.first_violation.condition == "no-jump"


@pytest.mark.parametrize("G", [
    Linear(2), Linear(7), Linear(4096), Sharp(2), Sharp(3), Sharp(4),
    log_rescale(Linear(9)), small_cut(Linear(1000)), PROP2, Shifted(Linear(3), 100),
])
def test_builtins_are_fis_over_large_horizon(G):
    assert check_fis(G, 2**12).is_fis


def test_regularity_violation_detected():
    G = table([(0, 1), (1, F(1, 2)), (2, F(1, 4))], F(1, 8))
    r = check_fis(G, 5)
    assert r.is_fis and not r.is_regular


def test_classify():
    G = Linear(5)
    assert classify(G, 0) is Feasibility.STRONG
    assert classify(G, 3) is Feasibility.WEAK
    assert classify(G, 9) is Feasibility.UNFEASIBLE


def test_weak_closure_examples():
    sig = Signature.of(("plus2", 2))
    r = check_weak_closure(Linear(5), sig, term_len_bound=4)
    assert r.closed

    G = table([(0, 1), (1, 1), (2, 0)], 0)
    r = check_weak_closure(G, UNARY, term_len_bound=3)
    assert not r.closed
    assert r.witness_violation["symbol"] == "S" and r.witness_violation["value"] == 2

    r = check_weak_closure(Linear(3), UNARY, term_len_bound=10)
    assert r.strict_witness_found and r.strict_witness == numeral(3)


def test_radius_examples():
    assert feasibility_radius(Linear(5), UNARY, term_len_bound=20).radius == 4
    assert feasibility_radius(Linear(5), Signature.of("*"), term_len_bound=20).radius == 4
    r = feasibility_radius(table([(0, 1)], F(1, 2)), UNARY, term_len_bound=6)
    assert r.radius == 5 and r.horizon_limited


@given(st.integers(2, 40))
def test_unary_radius_is_N_minus_1(N):
    r = feasibility_radius(Linear(N), UNARY, term_len_bound=N + 5)
    assert r.radius == N - 1 and not r.horizon_limited


def test_domination_examples():
    d = dominates(Linear(5), log_rescale(Linear(5)), 30)
    assert d.weak and not d.strict_paper
    assert not dominates(Linear(5), Linear(5), 30).weak


@given(st.integers(2, 50), st.integers(2, 50))
def test_literal_domination_never_holds(a, b):
    assert not dominates(Linear(a), Linear(b), 20).strict_paper


def test_defuzzify_examples():
    assert defuzzify(Linear(5), SupportCut).elements == (0, 1, 2, 3, 4, INF)
    strong = defuzzify(Linear(5), StrongCut)
    assert strong.elements == (0, INF)
    sa = defuzzify(Linear(5), SupportCut)
    assert sa.add(3, 4) is INF
    with pytest.raises(NotStrict):
        defuzzify(table([(0, 1)], 1), SupportCut, term_len_bound=10)


@given(st.integers(2, 60), st.integers(0, 80), st.integers(0, 80))
def test_saturated_arithmetic_agrees_below_radius(N, x, y):
    sa = defuzzify(Linear(N), SupportCut, term_len_bound=100)
    r = sa.radius
    assume(x <= r and y <= r)
    assert sa.add(x, y) == (x + y if x + y <= r else INF)
    assert sa.mul(x, y) == (x * y if x * y <= r else INF)
    assert sa.succ(x) == (x + 1 if x + 1 <= r else INF)


@given(st.integers(2, 60))
def test_support_cut_size_is_radius_plus_two(N):
    G = Linear(N)
    sa = defuzzify(G, SupportCut, term_len_bound=N + 2)
    assert len(sa.elements) == feasibility_radius(G, UNARY, term_len_bound=N + 2).radius + 2


# weakly plus2-closed family: Shifted(Linear(N), n0) with N > n0 + 2
plus2_closed = st.integers(0, 6).flatmap(
    lambda n0: st.integers(n0 + 3, 40).map(lambda N: Shifted(Linear(N), n0)))


@given(plus2_closed)
def test_log_rescale_closed_under_multiplication(G):
    assert check_weak_closure_values(G, PLUS2, 200) is None
    Gp = log_rescale(G)
    assert binary_closure_violation(Gp, "*", 2**7) is None
    assert dominates(G, Gp, 2**7).weak


def test_log_rescale_needs_the_premise():
    # not plus2-closed: only 0..1 strong, 1+1+2 = 4 already has degree 0
    G = table([(0, 1), (1, 1), (2, F(1, 2))], 0)
    assert check_weak_closure_values(G, PLUS2, 10) is not None


# tables with G(2) = 1 that are weakly multiplication-closed
@st.composite
def mult_closed_tables(draw):
    ones = draw(st.integers(2, 5))
    steps = draw(st.lists(st.integers(1, 8), min_size=1, max_size=4))
    vals = sorted({F(draw(st.integers(1, 7)), 8) for _ in steps}, reverse=True)
    entries, k = [(0, F(1))], ones + 1
    for v in vals:
        entries.append((k, v))
        k += draw(st.integers(1, 6))
    # products of strong values reach ones**2, which must stay positive
    entries.append((max(k, ones * ones), vals[-1]))
    return table(entries, 0)


@given(mult_closed_tables())
def test_small_cut_closed_under_addition(G):
    times = {"*": STANDARD_OPS["*"]}
    assume(check_weak_closure_values(G, times, 400) is None)
    assert evaluate(G, 2) == 1
    assert binary_closure_violation(small_cut(G), "+", 64) is None


def test_parallel_pair_scan_matches_serial():
    G = table([(0, 1), (5, F(1, 2)), (8, 0)], 0)
    serial = binary_closure_violation(G, "+", 40)
    assert serial == (4, 4)
    assert binary_closure_violation(G, "+", 40, jobs=2) == serial
