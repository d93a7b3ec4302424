"""Growing polygon families: Fibonacci grid and L(2, 3).

Each polygon is certified empty by the row sweep before it is printed.

Run: python demos/unbounded_families.py [--big]
(--big adds m=23, a 24-vertex polygon with exponents near 24727; about two minutes)
"""
import sys

from helly_lattice.constructions import fibonacci_polygon, semiconvergent_polygon
from helly_lattice.contfrac import cf_expand
from helly_lattice.lattice import coordinate
from helly_lattice.scalar import parse_scalar


def main():
    print("Fibonacci grid, points (F(i+2), F(i)) for odd i")
    for k in (2, 4, 8, 12):
        rep = fibonacci_polygon(k)
        last = coordinate(rep.polygon.spec, rep.polygon.sorted_vertices()[-1])
        print(f"  k={k:>2}: {len(rep):>2} vertices, {rep.certificate.verdict}, largest point {last}")

    print()
    print("L(2, 3): exponents from semi-convergents of log2(3)")
    print(f"  log2(3) = {cf_expand(parse_scalar('log(3)/log(2)'), 12)}")
    for m in (2, 3, 5, 23) if "--big" in sys.argv else (2, 3, 5):
        rep = semiconvergent_polygon(2, 3, m)
        p = rep.parameters
        print(f"  m={m:>2}: n={p['n']}, a_(n+1)={p['a_next']}, {len(rep)} vertices, "
              f"{rep.certificate.verdict}, last exponents {tuple(rep.polygon.sorted_vertices()[-1])}")


if __name__ == "__main__":
    main()
