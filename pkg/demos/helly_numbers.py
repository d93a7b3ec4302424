"""Window searches next to the closed-form bounds for a few bases.

Run: python demos/helly_numbers.py
"""
from fractions import Fraction

from helly_lattice.bounds import lower_bound_h, upper_bound_h
from helly_lattice.lattice import LatticeSpec, Window
from helly_lattice.scalar import format_scalar, parse_scalar
from helly_lattice.search import SearchConfig, max_empty_polygon

CASES = [
    (2, 4),
    (parse_scalar("(1+sqrt(5))/2"), 9),
    (Fraction(3, 2), 8),
    (Fraction(5, 4), 8),
]


def main():
    print(f"{'alpha':>20} {'window':>7} {'found':>6} {'lower':>6} {'upper':>6}")
    for alpha, size in CASES:
        res = max_empty_polygon(LatticeSpec.diagonal(alpha), SearchConfig(Window(size, size)))
        print(f"{format_scalar(alpha):>20} {size:>5}x{size} {res.cardinality:>6} "
              f"{lower_bound_h(alpha):>6} {upper_bound_h(alpha):>6}")
        if res.cardinality == upper_bound_h(alpha):
            print(f"{'':>20} window is conclusive: the search meets the upper bound")
        print(f"{'':>20} vertices {[tuple(p) for p in res.best.vertices]}")


if __name__ == "__main__":
    main()
