"""Exact ordered-field scalars.

Three kinds of numbers flow through every predicate in the package:

* ``int`` / :class:`fractions.Fraction` -- exact rationals,
* :class:`QuadraticSurd` -- ``a + b*sqrt(d)`` with rational ``a, b`` and a
  square-free ``d > 1``,
* :class:`CertifiedReal` -- a lazily evaluated real with rigorous interval
  enclosures at any requested precision.

Comparisons between exact values are decided algebraically.  Comparisons
involving a :class:`CertifiedReal` refine the enclosures under the active
:class:`PrecisionPolicy` and raise :class:`PrecisionExhausted` rather than
guess when the intervals still overlap at ``max_bits``.
"""
from __future__ import annotations

import contextlib
import contextvars
import enum
import math
import os
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

from mpmath.libmp import libmpi
from mpmath.libmp.libmpf import (
    fone,
    from_int,
    from_rational,
    mpf_add,
    mpf_eq,
    mpf_lt,
    mpf_sign,
    mpf_sqrt,
    round_ceiling,
    round_floor,
    to_rational,
)

__all__ = [
    "CertifiedReal",
    "IncompatibleSurds",
    "Ordering",
    "PrecisionExhausted",
    "PrecisionPolicy",
    "QuadraticSurd",
    "Scalar",
    "arith",
    "compare",
    "enclosure",
    "floor",
    "format_scalar",
    "get_policy",
    "is_exact",
    "parse_scalar",
    "pow_int",
    "precision",
    "sign",
    "surd",
    "to_float",
    "track_precision",
]


class PrecisionExhausted(ArithmeticError):
    """Enclosures still overlap at the maximum allowed precision."""


class IncompatibleSurds(ArithmeticError):
    """Surds from different quadratic fields met while promotion is disabled."""


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


# ---------------------------------------------------------------------------
# precision policy


def _env_max_bits() -> int:
    raw = os.environ.get("HELLY_MAX_PRECISION_BITS")
    if not raw:
        return 4096
    value = int(raw)
    if value < 1:
        raise ValueError("HELLY_MAX_PRECISION_BITS must be positive")
    return value


@dataclass(frozen=True)
class PrecisionPolicy:
    start_bits: int = 64
    max_bits: int = 4096
    factor: int = 2
    allow_promotion: bool = True

    def __post_init__(self):
        if self.start_bits < 1 or self.max_bits < 1:
            raise ValueError("precision bounds must be positive")
        if self.start_bits > self.max_bits:
            raise ValueError("start_bits must not exceed max_bits")
        if self.factor < 2:
            raise ValueError("escalation factor must be at least 2")

    def schedule(self):
        bits = self.start_bits
        while True:
            yield bits
            if bits >= self.max_bits:
                return
            bits = min(bits * self.factor, self.max_bits)


_policy: contextvars.ContextVar[PrecisionPolicy | None] = contextvars.ContextVar(
    "helly_precision_policy", default=None
)
_tracker: contextvars.ContextVar[list | None] = contextvars.ContextVar(
    "helly_precision_tracker", default=None
)


def get_policy() -> PrecisionPolicy:
    policy = _policy.get()
    if policy is None:
        max_bits = _env_max_bits()
        policy = PrecisionPolicy(start_bits=min(64, max_bits), max_bits=max_bits)
    return policy


@contextlib.contextmanager
def precision(max_bits: int | None = None, start_bits: int | None = None,
              allow_promotion: bool | None = None):
    """Temporarily override the active precision policy."""
    cur = get_policy()
    new = PrecisionPolicy(
        start_bits=start_bits if start_bits is not None else min(cur.start_bits, max_bits or cur.max_bits),
        max_bits=max_bits if max_bits is not None else cur.max_bits,
        factor=cur.factor,
        allow_promotion=cur.allow_promotion if allow_promotion is None else allow_promotion,
    )
    token = _policy.set(new)
    try:
        yield new
    finally:
        _policy.reset(token)


@contextlib.contextmanager
def track_precision():
    """Record the largest precision (bits) any comparison needed.

    Yields a one-element list; ``box[0]`` holds the maximum after the block
    (0 when every comparison was decided exactly).
    """
    box = [0]
    token = _tracker.set(box)
    try:
        yield box
    finally:
        _tracker.reset(token)
        outer = _tracker.get()
        if outer is not None:
            outer[0] = max(outer[0], box[0])


def _note_bits(bits: int) -> None:
    box = _tracker.get()
    if box is not None and bits > box[0]:
        box[0] = bits


# ---------------------------------------------------------------------------
# quadratic surds


def _squarefree_split(d: int) -> tuple[int, int]:
    """Return (s, r) with d == s*s*r and r square-free."""
    s, r = 1, d
    f = 2
    while f * f <= r:
        while r % (f * f) == 0:
            r //= f * f
            s *= f
        f += 1
    return s, r


def surd(a, b, d: int):
    """Build ``a + b*sqrt(d)``, collapsing to a Fraction when possible."""
    a = Fraction(a)
    b = Fraction(b)
    if d < 0:
        raise ValueError("only real quadratic fields are supported")
    if d == 0 or b == 0:
        return a
    s, r = _squarefree_split(d)
    if r == 1:
        return a + b * s
    return QuadraticSurd(a, b * s, r)


@dataclass(frozen=True)
class QuadraticSurd:
    """``a + b*sqrt(d)``; always ``b != 0`` and ``d`` square-free, ``d > 1``."""

    a: Fraction
    b: Fraction
    d: int

    def __post_init__(self):
        if self.b == 0 or self.d <= 1:
            raise ValueError("use surd() to build normalized values")

    # -- helpers
    def _coerce(self, other):
        """Return (a, b) of ``other`` in this field, or None if foreign."""
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0)
        if isinstance(other, QuadraticSurd) and other.d == self.d:
            return other.a, other.b
        return None

    def _foreign(self, other, op):
        if isinstance(other, QuadraticSurd) or isinstance(other, CertifiedReal):
            if not get_policy().allow_promotion and isinstance(other, QuadraticSurd):
                raise IncompatibleSurds(f"sqrt({self.d}) mixed with sqrt({other.d})")
            return op(CertifiedReal.exact(self), CertifiedReal.lift(other))
        return NotImplemented

    def conjugate(self) -> QuadraticSurd:
        return QuadraticSurd(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    # -- arithmetic
    def __neg__(self):
        return QuadraticSurd(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return self._foreign(other, lambda x, y: x + y)
        return surd(self.a + c[0], self.b + c[1], self.d)

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return self._foreign(other, lambda x, y: x - y)
        return surd(self.a - c[0], self.b - c[1], self.d)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        c = self._coerce(other)
        if c is None:
            return self._foreign(other, lambda x, y: x * y)
        a, b = c
        return surd(self.a * a + self.b * b * self.d, self.a * b + self.b * a, self.d)

    def __rmul__(self, other):
        return self.__mul__(other)

    def reciprocal(self) -> QuadraticSurd:
        n = self.norm()  # nonzero: sqrt(d) is irrational
        return QuadraticSurd(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return self._foreign(other, lambda x, y: x / y)
        if c[1] == 0:
            if c[0] == 0:
                raise ZeroDivisionError("division by zero")
            return surd(self.a / c[0], self.b / c[0], self.d)
        return self * QuadraticSurd(c[0], c[1], self.d).reciprocal()

    def __rtruediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return self.reciprocal() * c[0]

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        return pow_int(self, n)

    # -- order
    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sa == 0:
            return sb
        # opposite signs: compare a^2 with b^2 d
        diff = self.a * self.a - self.b * self.b * self.d
        return sa if diff > 0 else sb

    def __lt__(self, other):
        return compare(self, other) is Ordering.LESS

    def __le__(self, other):
        return compare(self, other) is not Ordering.GREATER

    def __gt__(self, other):
        return compare(self, other) is Ordering.GREATER

    def __ge__(self, other):
        return compare(self, other) is not Ordering.LESS

    def __floor__(self) -> int:
        return floor(self)

    def __float__(self) -> float:
        return to_float(self)

    def __str__(self) -> str:
        return format_scalar(self)


# ---------------------------------------------------------------------------
# certified reals

_GUARD = 8


def _mpi_exact(value, prec):
    if isinstance(value, int):
        value = Fraction(value)
    if isinstance(value, Fraction):
        p, q = value.numerator, value.denominator
        return (from_rational(p, q, prec, round_floor),
                from_rational(p, q, prec, round_ceiling))
    # quadratic surd
    wp = prec + _GUARD
    root = (mpf_sqrt(from_int(value.d), wp, round_floor),
            mpf_sqrt(from_int(value.d), wp, round_ceiling))
    part = libmpi.mpi_mul(_mpi_exact(value.b, wp), root, wp)
    return libmpi.mpi_add(_mpi_exact(value.a, wp), part, prec)


def _widen(iv, prec):
    """Push both ends out by one unit in the last place (transcendental ops)."""
    lo, hi = iv
    return (_nudge(lo, prec, -1), _nudge(hi, prec, +1))


def _nudge(x, prec, direction):
    _, man, exp, bc = x
    if man == 0:
        ulp = (0, 1, -prec - 64, 1)
    else:
        ulp = (0, 1, exp + bc - prec - 1, 1)
    if direction < 0:
        return mpf_add(x, (1,) + ulp[1:], prec, round_floor)
    return mpf_add(x, ulp, prec, round_ceiling)


class CertifiedReal:
    """A real number known through rigorous interval enclosures.

    Instances form an immutable expression DAG.  ``enclosure(bits)`` returns
    a closed interval with dyadic rational end points whose relative width
    shrinks as ``bits`` grows.  Results are memoised per precision, so the
    same node is cheap to re-query.
    """

    __slots__ = ("_kind", "_args", "_memo", "_lock", "_text", "__weakref__")

    def __init__(self, kind: str, args: tuple, text: str | None = None):
        self._kind = kind
        self._args = args
        self._memo: dict[int, tuple] = {}
        self._lock = threading.Lock()
        self._text = text

    # -- constructors
    @classmethod
    def exact(cls, value) -> CertifiedReal:
        return cls("exact", (value,))

    @classmethod
    def lift(cls, value) -> CertifiedReal:
        if isinstance(value, CertifiedReal):
            return value
        if not isinstance(value, (int, Fraction, QuadraticSurd)):
            raise TypeError(f"cannot lift {type(value).__name__} to CertifiedReal")
        return cls.exact(value)

    @classmethod
    def log(cls, x) -> CertifiedReal:
        if compare(x, 0) is not Ordering.GREATER:
            raise ValueError("log of a non-positive number")
        return cls("log", (cls.lift(x),))

    @classmethod
    def exp(cls, x) -> CertifiedReal:
        return cls("exp", (cls.lift(x),))

    @classmethod
    def sqrt(cls, x) -> CertifiedReal:
        if compare(x, 0) is Ordering.LESS:
            raise ValueError("sqrt of a negative number")
        return cls("sqrt", (cls.lift(x),))

    @classmethod
    def rpow(cls, base, exponent) -> CertifiedReal:
        """``base ** exponent`` for a positive base and a real exponent."""
        if compare(base, 0) is not Ordering.GREATER:
            raise ValueError("real power needs a positive base")
        return cls("rpow", (cls.lift(base), cls.lift(exponent)))

    @property
    def text(self) -> str:
        if self._text is None:
            self._text = self._render()
        return self._text

    def _render(self) -> str:
        k, a = self._kind, self._args
        if k == "exact":
            return format_scalar(a[0])
        if k in ("log", "exp", "sqrt"):
            return f"{k}({a[0].text})"
        if k == "neg":
            return f"(-{a[0].text})"
        if k == "pow":
            return f"({a[0].text})^{a[1]}"
        if k == "rpow":
            return f"({a[0].text})^({a[1].text})"
        sym = {"add": "+", "sub": "-", "mul": "*", "div": "/"}[k]
        return f"({a[0].text}{sym}{a[1].text})"

    # -- enclosure
    def _mpi(self, prec: int):
        got = self._memo.get(prec)
        if got is not None:
            return got
        k, a = self._kind, self._args
        wp = prec + _GUARD
        if k == "exact":
            iv = _mpi_exact(a[0], prec)
        elif k == "add":
            iv = libmpi.mpi_add(a[0]._mpi(wp), a[1]._mpi(wp), prec)
        elif k == "sub":
            iv = libmpi.mpi_sub(a[0]._mpi(wp), a[1]._mpi(wp), prec)
        elif k == "mul":
            iv = libmpi.mpi_mul(a[0]._mpi(wp), a[1]._mpi(wp), prec)
        elif k == "div":
            den = a[1]._mpi(wp)
            if mpf_sign(den[0]) <= 0 <= mpf_sign(den[1]):
                # denominator not yet separated from zero at this precision
                iv = None
            else:
                iv = libmpi.mpi_div(a[0]._mpi(wp), den, prec)
        elif k == "neg":
            iv = libmpi.mpi_neg(a[0]._mpi(prec))
        elif k == "pow":
            iv = libmpi.mpi_pow_int(a[0]._mpi(wp + a[1].bit_length()), a[1], prec)
        elif k == "log":
            arg = a[0]._mpi(wp)
            if mpf_sign(arg[0]) <= 0:
                iv = None
            else:
                iv = _widen(libmpi.mpi_log(arg, prec), prec)
        elif k == "exp":
            iv = _widen(libmpi.mpi_exp(a[0]._mpi(wp), prec), prec)
        elif k == "sqrt":
            arg = a[0]._mpi(wp)
            lo = arg[0] if mpf_sign(arg[0]) > 0 else (0, 0, 0, 0)
            iv = libmpi.mpi_sqrt((lo, arg[1]), prec)
        elif k == "rpow":
            base, ex = a[0]._mpi(wp + 32), a[1]._mpi(wp + 32)
            if mpf_sign(base[0]) <= 0:
                iv = None
            else:
                lg = _widen(libmpi.mpi_log(base, wp + 32), wp + 32)
                iv = _widen(libmpi.mpi_exp(libmpi.mpi_mul(ex, lg, wp + 32), prec), prec)
        else:  # pragma: no cover - constructor guards kinds
            raise AssertionError(k)
        if iv is None:
            # unusable enclosure at this precision: whole line
            iv = (libmpi.fninf, libmpi.finf)
        with self._lock:
            self._memo[prec] = iv
        return iv

    def enclosure(self, bits: int) -> tuple[Fraction, Fraction]:
        """Enclosure at ``bits``, intersected with every coarser one computed so far.

        The intersection keeps successive refinements nested.
        """
        lo, hi = self._mpi(bits)
        for prec, (plo, phi) in list(self._memo.items()):
            if prec < bits:
                if mpf_lt(lo, plo):
                    lo = plo
                if mpf_lt(phi, hi):
                    hi = phi
        if lo == libmpi.fninf or hi == libmpi.finf:
            raise PrecisionExhausted(f"no finite enclosure of {self.text} at {bits} bits")
        return _frac(*to_rational(lo)), _frac(*to_rational(hi))

    # -- arithmetic
    def _bin(self, kind, other, swap=False):
        if not isinstance(other, (int, Fraction, QuadraticSurd, CertifiedReal)):
            return NotImplemented
        other = CertifiedReal.lift(other)
        args = (other, self) if swap else (self, other)
        if kind == "div" and is_exact(args[1]._exact_value()):
            if args[1]._exact_value() == 0:
                raise ZeroDivisionError("division by zero")
        return CertifiedReal(kind, args)

    def _exact_value(self):
        return self._args[0] if self._kind == "exact" else None

    def __add__(self, o):
        return self._bin("add", o)

    def __radd__(self, o):
        return self._bin("add", o, swap=True)

    def __sub__(self, o):
        return self._bin("sub", o)

    def __rsub__(self, o):
        return self._bin("sub", o, swap=True)

    def __mul__(self, o):
        return self._bin("mul", o)

    def __rmul__(self, o):
        return self._bin("mul", o, swap=True)

    def __truediv__(self, o):
        return self._bin("div", o)

    def __rtruediv__(self, o):
        return self._bin("div", o, swap=True)

    def __neg__(self):
        return CertifiedReal("neg", (self,))

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        return pow_int(self, n)

    def __lt__(self, other):
        return compare(self, other) is Ordering.LESS

    def __le__(self, other):
        return compare(self, other) is not Ordering.GREATER

    def __gt__(self, other):
        return compare(self, other) is Ordering.GREATER

    def __ge__(self, other):
        return compare(self, other) is not Ordering.LESS

    def __floor__(self) -> int:
        return floor(self)

    def __float__(self) -> float:
        return to_float(self)

    def __repr__(self) -> str:
        return f"CertifiedReal({self.text!r})"

    def __str__(self) -> str:
        return self.text


Scalar = Union[int, Fraction, QuadraticSurd, CertifiedReal]


# ---------------------------------------------------------------------------
# generic operations


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, QuadraticSurd))


def _frac(p, q) -> Fraction:
    return Fraction(int(p), int(q))


def enclosure(x: Scalar, bits: int) -> tuple[Fraction, Fraction]:
    """Closed interval with dyadic end points containing ``x``."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x), Fraction(x)
    return CertifiedReal.lift(x).enclosure(bits)


def _exact_sign(x) -> int:
    if isinstance(x, QuadraticSurd):
        return x.sign()
    return (x > 0) - (x < 0)


def sign(x: Scalar) -> int:
    return int(compare(x, 0))


def compare(x: Scalar, y: Scalar) -> Ordering:
    """Exact three-way comparison; certified operands are refined on demand."""
    if isinstance(x, (int, Fraction)) and isinstance(y, (int, Fraction)):
        return Ordering((x > y) - (x < y))
    if is_exact(x) and is_exact(y):
        if not (isinstance(x, QuadraticSurd) and isinstance(y, QuadraticSurd) and x.d != y.d):
            return Ordering(_exact_sign(x - y))
        # distinct fields with b != 0 on both sides: never equal, refine below
    cx, cy = CertifiedReal.lift(x), CertifiedReal.lift(y)
    policy = get_policy()
    for bits in policy.schedule():
        xl, xh = cx._mpi(bits)
        yl, yh = cy._mpi(bits)
        if mpf_lt(xh, yl):
            _note_bits(bits)
            return Ordering.LESS
        if mpf_lt(yh, xl):
            _note_bits(bits)
            return Ordering.GREATER
        if mpf_eq(xl, xh) and mpf_eq(yl, yh) and mpf_eq(xl, yl):
            # both enclosures collapsed to the same point: equality is proven
            _note_bits(bits)
            return Ordering.EQUAL
    _note_bits(policy.max_bits)
    raise PrecisionExhausted(
        f"cannot separate {format_scalar(x)} and {format_scalar(y)} within {policy.max_bits} bits"
    )


_OPS: dict[str, Callable] = {
    "add": lambda x, y: x + y,
    "sub": lambda x, y: x - y,
    "mul": lambda x, y: x * y,
    "div": lambda x, y: x / y,
}


def arith(op: str, x: Scalar, y: Scalar | None = None) -> Scalar:
    """Apply ``op`` in {add, sub, mul, div, neg}; exact when both inputs are."""
    if op == "neg":
        return -x
    if op == "div" and is_exact(y) and _exact_sign(y) == 0:
        raise ZeroDivisionError("division by zero")
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    if isinstance(x, int) and isinstance(y, int) and op == "div":
        return Fraction(x, y)
    return fn(x, y)


def pow_int(x: Scalar, n: int) -> Scalar:
    """``x ** n`` by repeated squaring; negative ``n`` needs ``x != 0``."""
    if n < 0:
        if is_exact(x) and _exact_sign(x) == 0:
            raise ZeroDivisionError("zero to a negative power")
        return arith("div", 1, pow_int(x, -n))
    if isinstance(x, (int, Fraction)):
        return Fraction(x) ** n if isinstance(x, Fraction) else x ** n
    if isinstance(x, CertifiedReal):
        if n == 0:
            return 1
        if n == 1:
            return x
        return CertifiedReal("pow", (x, n))
    result: Scalar = 1
    base: Scalar = x
    while n:
        if n & 1:
            result = base * result
        n >>= 1
        if n:
            base = base * base
    return result


def floor(x: Scalar) -> int:
    """Exact integer floor; certified values refine until the floor is pinned."""
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator // x.denominator
    if isinstance(x, QuadraticSurd):
        # floor(b*sqrt(d)) from an integer square root, then fix up exactly
        b2d = x.b * x.b * x.d
        root = math.isqrt(b2d.numerator * b2d.denominator) // b2d.denominator
        guess = math.floor(x.a) + (root if x.b > 0 else -root - 1)
        while _exact_sign(x - guess) < 0:
            guess -= 1
        while _exact_sign(x - (guess + 1)) >= 0:
            guess += 1
        return guess
    policy = get_policy()
    for bits in policy.schedule():
        lo, hi = x._mpi(bits)
        if lo == libmpi.fninf or hi == libmpi.finf:
            continue
        flo = math.floor(_frac(*to_rational(lo)))
        fhi = math.floor(_frac(*to_rational(hi)))
        if flo == fhi:
            _note_bits(bits)
            return flo
    _note_bits(policy.max_bits)
    raise PrecisionExhausted(f"floor of {x.text} undecided within {policy.max_bits} bits")


def to_float(x: Scalar) -> float:
    """Approximate decimal preview; never used by predicates."""
    if isinstance(x, (int, Fraction)):
        return float(x)
    if isinstance(x, QuadraticSurd):
        return float(x.a) + float(x.b) * math.sqrt(x.d)
    lo, hi = x._mpi(64)
    from mpmath.libmp.libmpf import to_float as _tf
    return (_tf(lo) + _tf(hi)) / 2


# ---------------------------------------------------------------------------
# text form


def format_scalar(x: Scalar) -> str:
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, QuadraticSurd):
        den = math.lcm(x.a.denominator, x.b.denominator)
        A = x.a.numerator * (den // x.a.denominator)
        B = x.b.numerator * (den // x.b.denominator)
        body = f"({A}{'+' if B > 0 else '-'}{abs(B)}*sqrt({x.d}))"
        return body if den == 1 else f"{body}/{den}"
    return x.text


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = self._lex(text)
        self.i = 0

    @staticmethod
    def _lex(text):
        toks = []
        i = 0
        while i < len(text):
            c = text[i]
            if c.isspace():
                i += 1
            elif c.isdigit() or c == ".":
                j = i
                while j < len(text) and (text[j].isdigit() or text[j] == "."):
                    j += 1
                toks.append(("num", text[i:j]))
                i = j
            elif c.isalpha():
                j = i
                while j < len(text) and text[j].isalpha():
                    j += 1
                toks.append(("name", text[i:j]))
                i = j
            elif c in "+-*/^()":
                toks.append(("op", c))
                i += 1
            else:
                raise ValueError(f"unexpected character {c!r} in {text!r}")
        return toks

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ValueError(f"malformed scalar {self.text!r}")
        self.i += 1
        return tok

    def parse(self):
        v = self.expr()
        if self.i != len(self.toks):
            raise ValueError(f"trailing input in {self.text!r}")
        return v

    def expr(self):
        v = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            v = arith("add" if op == "+" else "sub", v, self.term())
        return v

    def term(self):
        v = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            v = arith("mul" if op == "*" else "div", v, self.unary())
        return v

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            return real_power(base, self.unary())
        return base

    def atom(self):
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return Fraction(val) if "." in val else int(val)
        if kind == "name":
            self.take()
            self.take("op", "(")
            arg = self.expr()
            self.take("op", ")")
            return _apply(val, arg)
        self.take("op", "(")
        v = self.expr()
        self.take("op", ")")
        return v


def _int_root(n: int, k: int) -> int | None:
    """Exact integer k-th root of n >= 0, or None."""
    if n < 2:
        return n
    # Newton iteration on integers from an upper bound
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    return x if x ** k == n else None


def exact_root(x: Scalar, k: int):
    """Exact ``k``-th root of a positive rational, or None if irrational."""
    if isinstance(x, int):
        x = Fraction(x)
    if not isinstance(x, Fraction) or x <= 0:
        return None
    if k == 1:
        return x
    p = _int_root(x.numerator, k)
    q = _int_root(x.denominator, k)
    if p is None or q is None:
        return None
    return Fraction(p, q)


def real_power(base, ex):
    if isinstance(ex, int) or (isinstance(ex, Fraction) and ex.denominator == 1):
        return pow_int(base, int(ex))
    if isinstance(ex, Fraction):
        root = exact_root(base, ex.denominator)
        if root is not None:
            return pow_int(root, ex.numerator)
        if ex.denominator == 2 and isinstance(base, (int, Fraction)):
            return pow_int(_apply("sqrt", base), ex.numerator)
    return CertifiedReal.rpow(base, ex)


def _apply(name, arg):
    if name == "sqrt":
        if isinstance(arg, (int, Fraction)):
            arg = Fraction(arg)
            if arg < 0:
                raise ValueError("sqrt of a negative number")
            # sqrt(p/q) = sqrt(p*q)/q
            return surd(0, Fraction(1, arg.denominator), arg.numerator * arg.denominator)
        return CertifiedReal.sqrt(arg)
    if name == "log":
        if arg == 1:
            return 0
        return CertifiedReal.log(arg)
    if name == "exp":
        if arg == 0:
            return 1
        return CertifiedReal.exp(arg)
    raise ValueError(f"unknown function {name!r}")


def parse_scalar(text: str) -> Scalar:
    """Parse ``p/q``, ``(a+b*sqrt(d))/c``, ``log(x)/log(y)``, decimals, powers."""
    value = _Parser(text).parse()
    if isinstance(value, CertifiedReal):
        value._text = text.replace(" ", "")
    return value
