from fractions import Fraction as F

import pytest

from helly_lattice.lattice import (
    IndexOutOfRange,
    LatticeSpec,
    Window,
    coordinate,
    enumerate_points,
    exponent_range_in_interval,
    parse_lattice,
)
from helly_lattice.scalar import compare, Ordering, pow_int, surd

PHI = surd(F(1, 2), F(1, 2), 5)


def test_coordinate_examples():
    assert coordinate(LatticeSpec.diagonal(2), (3, 1)) == (8, 2)
    assert coordinate(LatticeSpec.rectangular(2, 3), (2, 3)) == (4, 27)
    assert coordinate(LatticeSpec.fibonacci_grid(), (5, 3)) == (8, 3)


def test_fibonacci_indexing():
    fib = LatticeSpec.fibonacci_grid()
    assert [fib.value(0, i) for i in range(8)] == [1, 1, 2, 3, 5, 8, 13, 21]


def test_enumerate_examples():
    assert enumerate_points(LatticeSpec.diagonal(2), Window(1, 1)) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert enumerate_points(LatticeSpec.diagonal(2), Window(0, 0)) == [(0, 0)]
    assert len(enumerate_points(LatticeSpec.fibonacci_grid(), Window(2, 2))) == 9
    assert len(enumerate_points(LatticeSpec.diagonal(F(3, 2)), Window(4, 6))) == 35


def test_exponent_range_examples():
    assert list(exponent_range_in_interval(2, 3, 20)) == [2, 3, 4]
    assert list(exponent_range_in_interval(F(3, 2), 1, 1)) == [0]
    assert list(exponent_range_in_interval(PHI, PHI ** 2, PHI ** 5)) == [2, 3, 4, 5]
    assert list(exponent_range_in_interval(2, 4, 8, lo_strict=True, hi_strict=True)) == []
    assert list(exponent_range_in_interval(2, 5, 7)) == []


@pytest.mark.parametrize("base", [2, F(3, 2), PHI])
def test_exponent_range_recovers_exponents(base):
    for a in range(0, 31, 3):
        for b in range(a, 31, 4):
            got = exponent_range_in_interval(base, pow_int(base, a), pow_int(base, b))
            assert list(got) == list(range(a, b + 1))


@pytest.mark.parametrize("spec", [LatticeSpec.diagonal(PHI), LatticeSpec.rectangular(2, F(3, 2)),
                                  LatticeSpec.fibonacci_grid()])
def test_coordinates_increase(spec):
    start = 1 if spec.kind == "fibonacci" else 0
    for axis in (0, 1):
        for i in range(start, 25):
            assert compare(spec.value(axis, i), spec.value(axis, i + 1)) is Ordering.LESS


def test_bases_must_exceed_one():
    with pytest.raises(ValueError):
        LatticeSpec.diagonal(1)
    with pytest.raises(ValueError):
        LatticeSpec.rectangular(2, F(1, 2))


def test_primes_out_of_range():
    spec = LatticeSpec.primes(30)
    assert spec.value(0, 9) == 29
    with pytest.raises(IndexOutOfRange):
        spec.value(0, 10)
    with pytest.raises(IndexOutOfRange):
        enumerate_points(spec, Window(10, 2))


@pytest.mark.parametrize("text", ["exp:2", "exp:2,3", "exp:(1+1*sqrt(5))/2", "fib", "primes:200",
                                  "exp:2,(2)^((0+1*sqrt(2)))"])
def test_parse_round_trip(text):
    spec = parse_lattice(text)
    assert str(spec) == text
    assert str(parse_lattice(str(spec))) == text


def test_parse_kinds():
    assert parse_lattice("exp:(1+1*sqrt(5))/2").alpha == PHI
    assert parse_lattice("exp:2,3").kind == "rectangular"
    assert parse_lattice("primes:200").axis_length() == 46
    with pytest.raises(ValueError):
        parse_lattice("hex:2")


def test_window_offsets():
    w = Window(3, 4, 1, 2)
    assert w.size == 9
    assert enumerate_points(LatticeSpec.diagonal(2), w)[0] == (1, 2)
    assert w.shifted(1, 1) == Window(4, 5, 2, 3)
