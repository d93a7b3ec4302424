import random
from fractions import Fraction as F

import pytest

import oracles
from helly_lattice.bounds import (
    ALPHA_GEQ_2,
    BELOW_GOLDEN,
    GOLDEN,
    GOLDEN_TO_TWO,
    INFINITE,
    RECT_IRRATIONAL,
    RECT_RATIONAL,
    BoundReport,
    RelationUndecided,
    bound_report,
    ceil_log,
    edge_type_budget,
    find_relation,
    hyperbola_k,
    lower_bound_h,
    rect_bounds,
    type_one_exponent,
    upper_bound_h,
)
from helly_lattice.kernel import EdgeType
from helly_lattice.scalar import Ordering, compare, parse_scalar, pow_int, surd

I, II, III, IV = EdgeType.I, EdgeType.II, EdgeType.III, EdgeType.IV


def test_ceil_log_examples():
    assert ceil_log(2, 2) == 1
    assert ceil_log(F(3, 2), 3) == 3
    assert ceil_log(GOLDEN, 1) == 0
    with pytest.raises(ValueError):
        ceil_log(1, 3)
    with pytest.raises(ValueError):
        ceil_log(2, F(1, 2))


def test_ceil_log_matches_oracle():
    rng = random.Random(9)
    for _ in range(300):
        base = F(rng.randint(101, 400), 100)
        value = F(rng.randint(100, 10 ** 5), 100)
        assert ceil_log(base, value) == oracles.ceil_log(base, value)


def test_upper_bound_examples():
    assert upper_bound_h(2) == 5
    assert upper_bound_h(GOLDEN) == 7
    assert upper_bound_h(F(3, 2)) == 12


def test_lower_bound_examples():
    assert lower_bound_h(2) == 5
    assert lower_bound_h(F(101, 100)) == 10
    assert lower_bound_h(F(3, 2)) == 5
    assert hyperbola_k(F(26, 25)) == 5


def test_budget_examples():
    assert edge_type_budget(2) == {I: 1, II: 2, III: 2, IV: 2}
    # 3/2 < 5/3 <= 9/4, so t = 2 and the type III budget is 2t + 1 = 5
    assert edge_type_budget(F(3, 2)) == {I: 3, II: 4, III: 5, IV: 4}
    assert edge_type_budget(F(101, 100))[I] == 464


def test_lower_never_exceeds_upper():
    rng = random.Random(1)
    for _ in range(1000):
        alpha = F(rng.randint(1, 3000), 1000) + 1
        if alpha == 1:
            continue
        assert lower_bound_h(alpha) <= upper_bound_h(alpha)
        report = bound_report(alpha)
        assert report.lower <= report.upper


def test_regime_boundaries_are_exact():
    assert upper_bound_h(2) == 5
    assert upper_bound_h(2 - F(1, 10 ** 12)) == 7
    assert upper_bound_h(GOLDEN) == 7
    below = F(1618033988749, 10 ** 12)
    above = below + F(1, 10 ** 12)
    assert compare(below, GOLDEN) is Ordering.LESS and compare(above, GOLDEN) is Ordering.GREATER
    assert upper_bound_h(above) == 7
    assert upper_bound_h(below) == 3 * type_one_exponent(below) + 3
    assert bound_report(2).regime == ALPHA_GEQ_2
    assert bound_report(GOLDEN).regime == GOLDEN_TO_TWO
    assert bound_report(below).regime == BELOW_GOLDEN


@pytest.mark.parametrize("alpha", [F(101, 100), F(3, 2), F(6, 5), F(161, 100), GOLDEN, 2, 3, surd(0, 1, 2)])
def test_type_one_exponent_inequality(alpha):
    r = type_one_exponent(alpha)
    assert compare(pow_int(alpha, r) - pow_int(alpha, r - 1), 1) is not Ordering.LESS
    if r >= 1:
        assert compare(pow_int(alpha, r - 1) - pow_int(alpha, r - 2), 1) is Ordering.LESS


def test_find_relation():
    assert find_relation(2, 2) == (1, 1)
    assert find_relation(2, 4) == (2, 1)
    assert find_relation(8, 4) == (2, 3)
    assert find_relation(F(9, 4), F(27, 8)) == (3, 2)
    assert find_relation(2, 3) is None
    assert find_relation(GOLDEN, GOLDEN * GOLDEN) == (2, 1)
    with pytest.raises(RelationUndecided):
        find_relation(surd(0, 1, 2), surd(0, 1, 3))
    with pytest.raises(RelationUndecided):
        find_relation(2, parse_scalar("2^sqrt(2)"))


def test_rect_examples():
    r = rect_bounds(2, 2)
    assert (r.lower, r.upper, r.regime) == (1, 6, RECT_RATIONAL)
    r = rect_bounds(2, 4)
    assert (r.quantities["p"], r.quantities["q"], r.upper) == (2, 1, 11)
    r = rect_bounds(2, 3)
    assert r.lower == INFINITE and r.upper == INFINITE and r.regime == RECT_IRRATIONAL
    assert not r.finite


def test_rect_irrational_needs_assertion():
    beta = parse_scalar("2^sqrt(2)")
    with pytest.raises(RelationUndecided):
        rect_bounds(2, beta)
    assert rect_bounds(2, beta, assert_irrational=True).upper == INFINITE
    assert rect_bounds(2, beta, relation=(3, 2)).quantities["q"] == 2


def test_rect_lower_formula():
    # alpha = (1 + 1/100)^2 with q = 2: alpha^(1/q) - 1 = 1/100, k = 10
    alpha = F(101, 100) ** 2
    r = rect_bounds(alpha, F(101, 100))
    assert (r.quantities["p"], r.quantities["q"], r.quantities["k"]) == (1, 2, 10)
    assert r.lower == 10 // 2
    assert r.lower <= r.upper


def test_report_rejects_inverted_bounds():
    with pytest.raises(ValueError):
        BoundReport(9, 5, BELOW_GOLDEN)
