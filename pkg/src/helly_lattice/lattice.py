"""Point-set families: exponential lattices, the Fibonacci grid, prime grids.

Points are addressed by index pairs ``(u, v)``; coordinates are produced on
demand as exact scalars.  Every family here has coordinates that are
non-decreasing in each index, which is what makes finite windows and row
sweeps exact.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .scalar import (
    Ordering,
    Scalar,
    compare,
    format_scalar,
    parse_scalar,
    pow_int,
)

__all__ = [
    "IndexOutOfRange",
    "LatticePoint",
    "LatticeSpec",
    "Window",
    "coordinate",
    "enumerate_points",
    "exponent_range_in_interval",
    "fibonacci",
    "parse_lattice",
]

DIAGONAL = "diagonal"
RECTANGULAR = "rectangular"
FIBONACCI = "fibonacci"
PRIMES = "primes"


class IndexOutOfRange(IndexError):
    pass


class LatticePoint(NamedTuple):
    u: int
    v: int


@dataclass(frozen=True)
class Window:
    """Index rectangle ``[u_min, u_max] x [v_min, v_max]`` (inclusive)."""

    u_max: int
    v_max: int
    u_min: int = 0
    v_min: int = 0

    def __post_init__(self):
        if min(self.u_min, self.v_min) < 0:
            raise ValueError("window indices must be non-negative")

    @property
    def size(self) -> int:
        return max(0, self.u_max - self.u_min + 1) * max(0, self.v_max - self.v_min + 1)

    def shifted(self, du: int, dv: int) -> Window:
        return Window(self.u_max + du, self.v_max + dv, self.u_min + du, self.v_min + dv)


@functools.lru_cache(maxsize=1 << 16)
def _power(base: Scalar, n: int) -> Scalar:
    return pow_int(base, n)


_fib = [1, 1]


def fibonacci(n: int) -> int:
    """F_n with F_0 = F_1 = 1."""
    while len(_fib) <= n:
        _fib.append(_fib[-1] + _fib[-2])
    return _fib[n]


@functools.lru_cache(maxsize=32)
def _primes_upto(n: int) -> tuple[int, ...]:
    if n < 2:
        return ()
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(n ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return tuple(int(p) for p in np.flatnonzero(sieve))


@dataclass(frozen=True)
class LatticeSpec:
    kind: str
    alpha: Scalar | None = None
    beta: Scalar | None = None
    limit: int | None = None
    _text: str | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.kind in (DIAGONAL, RECTANGULAR):
            bases = (self.alpha,) if self.kind == DIAGONAL else (self.alpha, self.beta)
            for b in bases:
                if b is None or compare(b, 1) is not Ordering.GREATER:
                    raise ValueError("exponential lattice bases must exceed 1")
        elif self.kind == PRIMES:
            if self.limit is None or self.limit < 2:
                raise ValueError("prime grid needs a limit >= 2")
        elif self.kind != FIBONACCI:
            raise ValueError(f"unknown lattice kind {self.kind!r}")

    # -- constructors
    @classmethod
    def diagonal(cls, alpha) -> LatticeSpec:
        return cls(DIAGONAL, alpha)

    @classmethod
    def rectangular(cls, alpha, beta) -> LatticeSpec:
        return cls(RECTANGULAR, alpha, beta)

    @classmethod
    def fibonacci_grid(cls) -> LatticeSpec:
        return cls(FIBONACCI)

    @classmethod
    def primes(cls, limit: int) -> LatticeSpec:
        return cls(PRIMES, limit=limit)

    # -- properties
    @property
    def is_exponential(self) -> bool:
        return self.kind in (DIAGONAL, RECTANGULAR)

    def base(self, axis: int) -> Scalar:
        """Base of the x (axis 0) or y (axis 1) exponential."""
        if not self.is_exponential:
            raise TypeError(f"{self.kind} lattice has no base")
        return self.alpha if axis == 0 or self.kind == DIAGONAL else self.beta

    def axis_length(self) -> int | None:
        """Number of admissible indices per axis (None when unbounded)."""
        if self.kind == PRIMES:
            return len(_primes_upto(self.limit))
        return None

    def value(self, axis: int, index: int) -> Scalar:
        if index < 0:
            raise IndexOutOfRange(index)
        if self.is_exponential:
            return _power(self.base(axis), index)
        if self.kind == FIBONACCI:
            return fibonacci(index)
        ps = _primes_upto(self.limit)
        if index >= len(ps):
            raise IndexOutOfRange(f"prime index {index} beyond primes <= {self.limit}")
        return ps[index]

    def canonical_index(self, axis: int, index: int) -> int:
        """Smallest index with the same coordinate (F_0 == F_1 collapse)."""
        if self.kind == FIBONACCI and index == 1:
            return 0
        return index

    def same_point(self, p: LatticePoint, q: LatticePoint) -> bool:
        return (self.canonical_index(0, p[0]) == self.canonical_index(0, q[0])
                and self.canonical_index(1, p[1]) == self.canonical_index(1, q[1]))

    def first_index(self, axis: int, bound: Scalar, strict: bool = False) -> int:
        """Least index whose coordinate is >= bound (> bound when strict)."""
        if self.is_exponential:
            return _least_exponent(self.base(axis), bound, strict)
        values = self._values_through(bound)
        return _bisect_scalar(values, bound, strict)

    def last_index(self, axis: int, bound: Scalar, strict: bool = False) -> int:
        """Greatest index whose coordinate is <= bound (< bound when strict); -1 if none."""
        if self.is_exponential:
            return _least_exponent(self.base(axis), bound, not strict) - 1
        values = self._values_through(bound)
        return _bisect_scalar(values, bound, not strict) - 1

    def _values_through(self, bound: Scalar):
        if self.kind == FIBONACCI:
            while compare(_fib[-1], bound) is not Ordering.GREATER:
                fibonacci(len(_fib))
            return _fib
        return _primes_upto(self.limit)

    def index_range(self, axis: int, lo: Scalar, hi: Scalar,
                    lo_strict: bool = False, hi_strict: bool = False) -> range:
        """Indices whose coordinate on ``axis`` lies between ``lo`` and ``hi``."""
        first = self.first_index(axis, lo, lo_strict)
        last = self.last_index(axis, hi, hi_strict)
        return range(first, max(first, last + 1))

    # -- text
    def __str__(self) -> str:
        if self._text is not None:
            return self._text
        if self.kind == DIAGONAL:
            return f"exp:{format_scalar(self.alpha)}"
        if self.kind == RECTANGULAR:
            return f"exp:{format_scalar(self.alpha)},{format_scalar(self.beta)}"
        if self.kind == FIBONACCI:
            return "fib"
        return f"primes:{self.limit}"


def _split_top_level(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for c in text:
        if c == "(":
            depth += 1
        elif c == ")":
            depth -= 1
        if c == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(c)
    parts.append("".join(cur))
    return parts


def parse_lattice(text: str) -> LatticeSpec:
    """Parse ``exp:A``, ``exp:A,B``, ``fib`` or ``primes:N``."""
    text = text.strip()
    if text == "fib":
        return LatticeSpec.fibonacci_grid()
    head, sep, body = text.partition(":")
    if not sep:
        raise ValueError(f"malformed lattice spec {text!r}")
    if head == "primes":
        return LatticeSpec.primes(int(body))
    if head != "exp":
        raise ValueError(f"unknown lattice family {head!r}")
    parts = _split_top_level(body)
    if len(parts) == 1:
        return LatticeSpec(DIAGONAL, parse_scalar(parts[0]), _text=text)
    if len(parts) == 2:
        return LatticeSpec(RECTANGULAR, parse_scalar(parts[0]), parse_scalar(parts[1]), _text=text)
    raise ValueError(f"too many bases in {text!r}")


def coordinate(spec: LatticeSpec, p) -> tuple[Scalar, Scalar]:
    return spec.value(0, p[0]), spec.value(1, p[1])


def enumerate_points(spec: LatticeSpec, w: Window) -> list[LatticePoint]:
    """All index pairs of the window in lexicographic order."""
    n = spec.axis_length()
    if n is not None and (w.u_max >= n or w.v_max >= n):
        raise IndexOutOfRange(f"window exceeds the {n} available indices")
    return [LatticePoint(u, v)
            for u in range(w.u_min, w.u_max + 1)
            for v in range(w.v_min, w.v_max + 1)]


def _bisect_scalar(values, bound, strict: bool) -> int:
    """Position of the first value >= bound (> bound when strict)."""
    lo, hi = 0, len(values)
    while lo < hi:
        mid = (lo + hi) // 2
        c = compare(values[mid], bound)
        if c is Ordering.GREATER or (c is Ordering.EQUAL and not strict):
            hi = mid
        else:
            lo = mid + 1
    return lo


def _least_exponent(base: Scalar, bound: Scalar, strict: bool) -> int:
    """Least n >= 0 with base**n >= bound (> bound when strict)."""
    def ok(n):
        c = compare(_power(base, n), bound)
        return c is Ordering.GREATER or (c is Ordering.EQUAL and not strict)

    if ok(0):
        return 0
    lo, hi = 0, 1
    while not ok(hi):
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def exponent_range_in_interval(base: Scalar, lo: Scalar, hi: Scalar,
                               lo_strict: bool = False, hi_strict: bool = False) -> range:
    """All n >= 0 with ``base**n`` inside the (half-)open/closed interval.

    Uses doubling then bisection on exact comparisons only.
    """
    if compare(base, 1) is not Ordering.GREATER:
        raise ValueError("base must exceed 1")
    first = _least_exponent(base, lo, lo_strict)
    # last admissible n is one below the first n that leaves the interval
    stop = _least_exponent(base, hi, not hi_strict)
    return range(first, max(first, stop))
