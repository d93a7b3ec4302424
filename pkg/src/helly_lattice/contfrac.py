"""Continued fractions, convergents and best one-sided approximations."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .scalar import (
    CertifiedReal,
    Ordering,
    PrecisionExhausted,
    QuadraticSurd,
    Scalar,
    compare,
    floor,
    format_scalar,
    get_policy,
    _note_bits,
)

__all__ = [
    "CFExpansion",
    "Convergent",
    "SemiConvergent",
    "Side",
    "best_one_sided",
    "brute_force_best_one_sided",
    "cf_expand",
    "convergents",
    "semiconvergents",
]


class Side(str, enum.Enum):
    LOWER = "lower"
    UPPER = "upper"


@dataclass(frozen=True)
class CFExpansion:
    quotients: tuple[int, ...]
    exact: bool
    source: str = ""

    def __post_init__(self):
        if not self.quotients:
            raise ValueError("empty expansion")
        if any(a < 1 for a in self.quotients[1:]):
            raise ValueError("partial quotients after the first must be positive")

    @property
    def terms(self) -> int:
        return len(self.quotients)

    @property
    def termination(self) -> str:
        return "exact" if self.exact else "truncated"

    def value(self) -> Fraction:
        """Rational value of the (possibly truncated) expansion."""
        c = convergents(self)[-1]
        return Fraction(c.p, c.q)

    def __str__(self) -> str:
        head, *tail = self.quotients
        return f"[{head}]" if not tail else f"[{head};{','.join(map(str, tail))}]"


@dataclass(frozen=True)
class Convergent:
    n: int
    p: int
    q: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.p, self.q)

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


@dataclass(frozen=True)
class SemiConvergent:
    n: int
    i: int
    p: int
    q: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.p, self.q)


class CFPrecisionExhausted(PrecisionExhausted):
    """Raised with the certified prefix when a quotient cannot be pinned down."""

    def __init__(self, message: str, prefix: CFExpansion | None):
        super().__init__(message)
        self.prefix = prefix


def _expand_rational(x: Fraction, max_terms: int) -> tuple[list[int], bool]:
    out = []
    num, den = x.numerator, x.denominator
    while den and len(out) < max_terms:
        a, rem = divmod(num, den)
        out.append(a)
        num, den = den, rem
    return out, den == 0


def _expand_surd(x: QuadraticSurd, max_terms: int) -> list[int]:
    out = []
    while len(out) < max_terms:
        a = floor(x)
        out.append(a)
        rest = x - a
        if isinstance(rest, (int, Fraction)):
            # only reachable if the surd degenerates, kept for safety
            tail, _ = _expand_rational(1 / Fraction(rest), max_terms - len(out)) if rest else ([], True)
            return out + tail
        x = rest.reciprocal()
    return out


def _lockstep(lo: Fraction, hi: Fraction, max_terms: int) -> list[int]:
    """Quotients shared by every number in [lo, hi]."""
    out = []
    while len(out) < max_terms:
        a = math.floor(lo)
        if math.floor(hi) != a or lo == a:
            break
        out.append(a)
        lo, hi = 1 / (hi - a), 1 / (lo - a)
    return out


def _expand_certified(x: CertifiedReal, max_terms: int, strict: bool) -> tuple[list[int], bool]:
    policy = get_policy()
    best: list[int] = []
    for bits in policy.schedule():
        lo, hi = x.enclosure(bits)
        got = _lockstep(lo, hi, max_terms)
        if len(got) > len(best):
            best = got
        if len(best) >= max_terms:
            _note_bits(bits)
            return best, True
    _note_bits(policy.max_bits)
    if strict:
        prefix = CFExpansion(tuple(best), False, x.text) if best else None
        raise CFPrecisionExhausted(
            f"only {len(best)} of {max_terms} quotients certified within {policy.max_bits} bits", prefix)
    return best, False


def cf_expand(target: Scalar, max_terms: int, strict: bool = False) -> CFExpansion:
    """Simple continued fraction of a positive scalar.

    Rationals terminate exactly.  Surds are expanded in exact arithmetic.
    Certified reals emit a quotient only when it is shared by both ends of
    an enclosure; if precision runs out the certified prefix is returned
    marked truncated (or, with ``strict``, raised inside the exception).
    """
    if max_terms < 1:
        raise ValueError("max_terms must be positive")
    if compare(target, 0) is not Ordering.GREATER:
        raise ValueError("target must be positive")
    source = format_scalar(target)
    if isinstance(target, (int, Fraction)):
        qs, done = _expand_rational(Fraction(target), max_terms)
        return CFExpansion(tuple(qs), done, source)
    if isinstance(target, QuadraticSurd):
        return CFExpansion(tuple(_expand_surd(target, max_terms)), False, source)
    qs, complete = _expand_certified(target, max_terms, strict)
    if not qs:
        raise CFPrecisionExhausted("no quotient could be certified", None)
    return CFExpansion(tuple(qs), False, source)


def _seeded(quotients) -> tuple[list[int], list[int]]:
    """p and q sequences with the seeds p_{-2}, p_{-1} at positions 0 and 1."""
    ps, qs = [0, 1], [1, 0]
    for a in quotients:
        ps.append(a * ps[-1] + ps[-2])
        qs.append(a * qs[-1] + qs[-2])
    return ps, qs


def convergents(cf: CFExpansion) -> list[Convergent]:
    ps, qs = _seeded(cf.quotients)
    return [Convergent(n, ps[n + 2], qs[n + 2]) for n in range(len(cf.quotients))]


def semiconvergents(cf: CFExpansion, n: int, full: bool = False) -> list[SemiConvergent]:
    """(p_{n-1} + i p_n)/(q_{n-1} + i q_n) for 0 <= i < a_{n+1} (<= with ``full``)."""
    if not -1 <= n < len(cf.quotients) - 1:
        raise IndexError(f"a_{n + 1} is not available")
    ps, qs = _seeded(cf.quotients)
    a_next = cf.quotients[n + 1]
    top = a_next + 1 if full else a_next
    return [SemiConvergent(n, i, ps[n + 1] + i * ps[n + 2], qs[n + 1] + i * qs[n + 2])
            for i in range(top)]


def _enough_terms(target: Scalar, q_max: int) -> CFExpansion:
    terms = 8
    while True:
        cf = cf_expand(target, terms, strict=True)
        # semi-convergents at n need a_{n+1}; go one term past q_n > q_max
        cs = convergents(cf)
        if cf.exact or (len(cs) >= 2 and cs[-2].q > q_max):
            return cf
        terms *= 2


def best_one_sided(target: Scalar, side: Side | str, q_max: int) -> list[Fraction]:
    """Best lower or upper approximations with denominator at most ``q_max``.

    Lower ones are the semi-convergents with odd n, upper ones those with
    even n except (n, i) = (0, 0); 0 <= i < a_{n+1}.  A rational target is
    its own best approximation from either side.
    """
    side = Side(side)
    if q_max < 1:
        raise ValueError("q_max must be positive")
    cf = _enough_terms(target, q_max)
    parity = 1 if side is Side.LOWER else 0
    out: list[Fraction] = []
    last = len(cf.quotients) - 1
    for n in range(0, last):
        if n % 2 != parity % 2:
            continue
        for s in semiconvergents(cf, n):
            if n == 0 and s.i == 0:
                continue
            if s.q > q_max:
                break
            out.append(Fraction(s.p, s.q))
    if cf.exact:
        ps, qs = _seeded(cf.quotients)
        if last % 2 == parity % 2 and 0 < qs[last + 1] <= q_max:
            # the last convergent before the target, on this side
            out.append(Fraction(ps[last + 1], qs[last + 1]))
        if qs[-1] <= q_max:
            out.append(Fraction(ps[-1], qs[-1]))
    return sorted(set(out), key=lambda f: f.denominator)


def brute_force_best_one_sided(target: Scalar, side: Side | str, q_max: int) -> list[Fraction]:
    """Scan every denominator and keep the records of the one-sided error q|r - p/q|."""
    side = Side(side)
    out = []
    best = None  # (p, q) of the current record
    for q in range(1, q_max + 1):
        f = floor(q * target)
        if side is Side.LOWER:
            p = f
        else:
            p = f if compare(q * target, f) is Ordering.EQUAL else f + 1
        if math.gcd(p, q) != 1:
            continue
        if best is not None:
            # error q r - p compared with the record's, as (q - q0) r vs p - p0
            bp, bq = best
            c = compare((q - bq) * target, p - bp)
            better = c is Ordering.LESS if side is Side.LOWER else c is Ordering.GREATER
            if not better:
                continue
        best = (p, q)
        out.append(Fraction(p, q))
    return out
