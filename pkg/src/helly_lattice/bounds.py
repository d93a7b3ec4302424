"""Closed-form bounds on the largest empty polygon, evaluated exactly.

Every logarithm or square root in the bounds is turned into an integer
search over exact comparisons, so regime boundaries such as α = 2 or
α = φ are decided without rounding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .kernel import EdgeType
from .lattice import _least_exponent
from .scalar import (
    Ordering,
    QuadraticSurd,
    Scalar,
    arith,
    compare,
    exact_root,
    format_scalar,
    is_exact,
    pow_int,
    surd,
)

__all__ = [
    "GOLDEN",
    "INFINITE",
    "BoundReport",
    "RelationUndecided",
    "ceil_log",
    "edge_type_budget",
    "find_relation",
    "lower_bound_h",
    "rect_bounds",
    "upper_bound_h",
]

GOLDEN = surd(Fraction(1, 2), Fraction(1, 2), 5)
INFINITE = math.inf
RELATION_CAP = 64

ALPHA_GEQ_2 = "AlphaGeq2"
GOLDEN_TO_TWO = "GoldenToTwo"
BELOW_GOLDEN = "BelowGolden"
RECT_RATIONAL = "RectRational"
RECT_IRRATIONAL = "RectIrrational"


class RelationUndecided(ArithmeticError):
    """No relation beta = alpha^(p/q) found and irrationality was not asserted."""


def _check_base(alpha: Scalar) -> None:
    if compare(alpha, 1) is not Ordering.GREATER:
        raise ValueError("base must exceed 1")


def ceil_log(base: Scalar, value: Scalar) -> int:
    """Least n >= 0 with base**n >= value."""
    _check_base(base)
    if compare(value, 1) is Ordering.LESS:
        raise ValueError("value must be at least 1")
    return _least_exponent(base, value, strict=False)


def _regime(alpha: Scalar) -> str:
    if compare(alpha, 2) is not Ordering.LESS:
        return ALPHA_GEQ_2
    if compare(alpha, GOLDEN) is not Ordering.LESS:
        return GOLDEN_TO_TWO
    return BELOW_GOLDEN


def type_one_exponent(alpha: Scalar) -> int:
    """r = ceil(log_alpha(alpha / (alpha - 1)))."""
    return ceil_log(alpha, arith("div", alpha, alpha - 1))


def type_three_exponent(alpha: Scalar) -> int:
    """t = ceil(log_alpha((alpha + 1) / alpha))."""
    return ceil_log(alpha, arith("div", alpha + 1, alpha))


def hyperbola_k(alpha: Scalar) -> int:
    """floor(sqrt(1 / (alpha - 1))), i.e. the largest k with k^2 (alpha - 1) <= 1."""
    _check_base(alpha)
    gap = alpha - 1

    def ok(k):
        return compare(k * k * gap, 1) is not Ordering.GREATER

    lo, hi = 0, 1
    while ok(hi):
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


def upper_bound_h(alpha: Scalar) -> int:
    _check_base(alpha)
    regime = _regime(alpha)
    if regime == ALPHA_GEQ_2:
        return 5
    if regime == GOLDEN_TO_TWO:
        return 7
    return 3 * type_one_exponent(alpha) + 3


def lower_bound_h(alpha: Scalar) -> int:
    _check_base(alpha)
    regime = _regime(alpha)
    if regime == ALPHA_GEQ_2:
        return 5
    if regime == GOLDEN_TO_TWO:
        return 7
    return max(5, hyperbola_k(alpha))


def edge_type_budget(alpha: Scalar) -> dict[EdgeType, int]:
    """Largest possible number of edges of each type in an empty polygon of L(alpha)."""
    _check_base(alpha)
    r = type_one_exponent(alpha)
    if compare(alpha, 2) is Ordering.LESS:
        three = 2 * type_three_exponent(alpha) + 1
    else:
        three = 2
    return {EdgeType.I: r, EdgeType.II: r + 1, EdgeType.III: three, EdgeType.IV: r + 1}


# -- rectangular lattices


def _perfect_power(x: Fraction) -> tuple[Fraction, int]:
    """(root, k) with x = root**k and k maximal; x > 1."""
    top = max(x.numerator, x.denominator).bit_length()
    for k in range(top, 1, -1):
        root = exact_root(x, k)
        if root is not None:
            return root, k
    return x, 1


def find_relation(alpha: Scalar, beta: Scalar, cap: int = RELATION_CAP) -> tuple[int, int] | None:
    """Coprime (p, q) with beta**q == alpha**p, or None if there is none.

    Decided exactly for two rationals.  Otherwise p, q <= cap are tried by
    exact power comparison and RelationUndecided is raised if that fails.
    """
    _check_base(alpha)
    _check_base(beta)
    if isinstance(alpha, (int, Fraction)) and isinstance(beta, (int, Fraction)):
        ga, sa = _perfect_power(Fraction(alpha))
        gb, sb = _perfect_power(Fraction(beta))
        if ga != gb:
            return None
        g = math.gcd(sa, sb)
        return sb // g, sa // g
    if not (is_exact(alpha) and is_exact(beta)):
        raise RelationUndecided("relation between certified reals is not decidable here")
    for total in range(2, 2 * cap + 1):
        for q in range(max(1, total - cap), min(cap, total - 1) + 1):
            p = total - q
            if math.gcd(p, q) == 1 and compare(pow_int(beta, q), pow_int(alpha, p)) is Ordering.EQUAL:
                return p, q
    raise RelationUndecided(f"no relation with p, q <= {cap}; assert irrationality to proceed")


@dataclass(frozen=True)
class BoundReport:
    lower: float | int
    upper: float | int
    regime: str
    quantities: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError("lower bound exceeds upper bound")

    @property
    def finite(self) -> bool:
        return self.upper != INFINITE


def bound_report(alpha: Scalar) -> BoundReport:
    """Diagonal lattice bounds with the intermediate quantities."""
    regime = _regime(alpha)
    quantities = {
        "r": type_one_exponent(alpha),
        "t": type_three_exponent(alpha),
        "k": hyperbola_k(alpha),
        "budget": {t.value: n for t, n in edge_type_budget(alpha).items()},
    }
    return BoundReport(lower_bound_h(alpha), upper_bound_h(alpha), regime, quantities)


def _rect_k(alpha: Scalar, q: int) -> int:
    """floor(sqrt(1/(alpha^(1/q) - 1))): largest k with alpha <= (1 + 1/k^2)^q."""
    def ok(k):
        return compare(alpha, pow_int(1 + Fraction(1, k * k), q)) is not Ordering.GREATER

    if not ok(1):
        return 0
    lo, hi = 1, 2
    while ok(hi):
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


def rect_bounds(alpha: Scalar, beta: Scalar, relation: tuple[int, int] | None = None,
                assert_irrational: bool = False, cap: int = RELATION_CAP) -> BoundReport:
    """Bounds for L(alpha, beta); infinite exactly when log_alpha(beta) is irrational."""
    if relation is None:
        try:
            relation = find_relation(alpha, beta, cap)
        except RelationUndecided:
            if not assert_irrational:
                raise
            relation = None
    if relation is None:
        return BoundReport(INFINITE, INFINITE, RECT_IRRATIONAL, {"alpha": format_scalar(alpha),
                                                               "beta": format_scalar(beta)})
    p, q = relation
    if p < 1 or q < 1 or math.gcd(p, q) != 1:
        raise ValueError("relation must be a pair of coprime positive integers")
    k = _rect_k(alpha, q)
    base_p = pow_int(alpha, p)
    upper = p * q * upper_bound_h(base_p) + 1
    lower = k // (p * q)
    return BoundReport(lower, upper, RECT_RATIONAL, {
        "p": p, "q": q, "k": k,
        "h_alpha_p": upper_bound_h(base_p),
        "h_alpha_p_source": "upper_bound_h",
    })
