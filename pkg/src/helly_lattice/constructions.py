"""Explicit empty polygon families, each returned only with a certificate.

Every builder assembles a vertex set, lets the kernel order and check it,
and runs the row sweep.  A report is never returned for a polygon that did
not certify; the builder raises instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import bounds
from .contfrac import CFPrecisionExhausted, cf_expand, convergents
from .kernel import (
    CertificationFailed,
    EmptinessCertificate,
    Polygon,
    is_convex_position,
    is_empty_polygon,
)
from .lattice import LatticePoint, LatticeSpec
from .scalar import (
    CertifiedReal,
    Ordering,
    QuadraticSurd,
    Scalar,
    compare,
    format_scalar,
    pow_int,
    real_power,
)

__all__ = [
    "CFTooShort",
    "ConstructionReport",
    "DegenerateK",
    "PreconditionViolated",
    "RationalLogRatio",
    "SearchExhausted",
    "TooSmall",
    "convergent_polygon",
    "five_point",
    "fibonacci_polygon",
    "hyperbola",
    "rational_beta_polygon",
    "semiconvergent_polygon",
    "seven_point",
]

SEVEN_POINT_CAP = 200
N0_CAP = 41


class PreconditionViolated(ValueError):
    pass


class SearchExhausted(RuntimeError):
    pass


class DegenerateK(ValueError):
    pass


class TooSmall(ValueError):
    pass


class RationalLogRatio(ValueError):
    pass


class CFTooShort(ArithmeticError):
    pass


@dataclass(frozen=True)
class ConstructionReport:
    name: str
    polygon: Polygon
    parameters: dict
    certificate: EmptinessCertificate
    convex: bool = True

    def __len__(self) -> int:
        return len(self.polygon)

    def metadata(self) -> dict:
        return {"name": self.name, "parameters": dict(self.parameters)}


def _certified(name: str, spec: LatticeSpec, points, parameters: dict) -> ConstructionReport:
    polygon = Polygon.from_points(spec, points)
    cert = is_empty_polygon(polygon)
    if not cert.empty:
        raise CertificationFailed(
            f"{name}: lattice point {tuple(cert.witness)} lies in the polygon")
    return ConstructionReport(name, polygon, parameters, cert)


def _try_certify(spec: LatticeSpec, points):
    """Certified polygon on ``points`` or None if convexity or emptiness fails."""
    pts = [LatticePoint(*p) for p in points]
    if len(set(pts)) != len(pts) or not is_convex_position(spec, pts):
        return None
    polygon = Polygon.from_points(spec, pts)
    cert = is_empty_polygon(polygon)
    return (polygon, cert) if cert.empty else None


def _base_check(alpha: Scalar) -> None:
    if compare(alpha, 1) is not Ordering.GREATER:
        raise PreconditionViolated("alpha must exceed 1")


def five_point(alpha: Scalar) -> ConstructionReport:
    _base_check(alpha)
    pts = [(0, 2), (1, 1), (2, 0), (2, 1), (1, 2)]
    return _certified("five", LatticeSpec.diagonal(alpha), pts, {"alpha": format_scalar(alpha)})


def seven_point_vertices(k: int) -> list[tuple[int, int]]:
    return [(0, k), (k - 2, k - 1), (k - 1, k - 2), (k, 0), (k, 1), (k - 1, k - 1), (1, k)]


def _seven_point_seed(alpha: Scalar) -> int:
    """Least k >= 3 meeting both inequalities used in the convexity argument."""
    k = 3
    while k <= SEVEN_POINT_CAP:
        a = pow_int(alpha, k - 2)
        if (compare(a * (alpha + 1 - alpha * alpha), 1) is Ordering.LESS
                and compare(2 * a * (2 - alpha), 1) is not Ordering.LESS):
            return k
        k += 1
    return SEVEN_POINT_CAP


def seven_point(alpha: Scalar, cap: int = SEVEN_POINT_CAP) -> ConstructionReport:
    """The seven-vertex polygon for golden ratio <= alpha < 2 at the least k that certifies."""
    if compare(alpha, bounds.GOLDEN) is Ordering.LESS or compare(alpha, 2) is not Ordering.LESS:
        raise PreconditionViolated("seven_point needs golden ratio <= alpha < 2")
    spec = LatticeSpec.diagonal(alpha)
    seed = _seven_point_seed(alpha)
    for k in range(3, cap + 1):
        got = _try_certify(spec, seven_point_vertices(k))
        if got is not None:
            polygon, cert = got
            params = {"alpha": format_scalar(alpha), "k": k, "k_seed": seed}
            return ConstructionReport("seven", polygon, params, cert)
    raise SearchExhausted(f"no k <= {cap} certifies the seven-point polygon")


def hyperbola(alpha: Scalar, k: int | None = None) -> ConstructionReport:
    """Points (i, k - i), 1 <= i <= k; k defaults to floor(sqrt(1/(alpha - 1)))."""
    _base_check(alpha)
    if k is None:
        k = bounds.hyperbola_k(alpha)
    if k < 3:
        raise DegenerateK(f"k = {k} gives fewer than three vertices")
    pts = [(i, k - i) for i in range(1, k + 1)]
    return _certified("hyperbola", LatticeSpec.diagonal(alpha), pts,
                      {"alpha": format_scalar(alpha), "k": k})


def fibonacci_polygon(k: int) -> ConstructionReport:
    """Index pairs (i + 2, i) for odd i in 1..2k+1 on the Fibonacci grid."""
    if k < 2:
        raise TooSmall(f"k = {k} gives {max(k + 1, 0)} points, a polygon needs three")
    pts = [(i + 2, i) for i in range(1, 2 * k + 2, 2)]
    return _certified("fibonacci", LatticeSpec.fibonacci_grid(), pts, {"k": k})


def rational_beta_polygon(alpha: Scalar, p: int, q: int) -> ConstructionReport:
    """Hyperbola points of L(alpha^(1/q)) that lie in L(alpha, alpha^(p/q))."""
    _base_check(alpha)
    if p < 1 or q < 1 or math.gcd(p, q) != 1:
        raise PreconditionViolated("p and q must be coprime positive integers")
    k = bounds._rect_k(alpha, q)
    keep = [i for i in range(1, k + 1) if i % q == 0 and (k - i) % p == 0]
    if len(keep) < 3:
        raise DegenerateK(f"k = {k} leaves {len(keep)} admissible points")
    beta = alpha if p == q == 1 else real_power(alpha, Fraction(p, q))
    spec = LatticeSpec.diagonal(alpha) if p == q == 1 else LatticeSpec.rectangular(alpha, beta)
    pts = [(i // q, (k - i) // p) for i in keep]
    return _certified("rational-beta", spec, pts, {
        "alpha": format_scalar(alpha), "beta": format_scalar(beta),
        "p": p, "q": q, "k": k, "guaranteed": k // (p * q),
    })


def _log_ratio(alpha: Scalar, beta: Scalar) -> CertifiedReal:
    return CertifiedReal.log(beta) / CertifiedReal.log(alpha)


def semiconvergent_polygon(alpha: Scalar, beta: Scalar, m: int,
                           assert_irrational: bool = False,
                           max_terms: int = 200) -> ConstructionReport:
    """Points whose exponents are the semi-convergents of log_alpha(beta) at the first a_{n+1} >= m."""
    _base_check(alpha)
    _base_check(beta)
    if m < 2:
        raise PreconditionViolated("m must be at least 2")
    try:
        relation = bounds.find_relation(alpha, beta)
    except bounds.RelationUndecided:
        if not assert_irrational:
            raise
        relation = None
    if relation is not None:
        p, q = relation
        raise RationalLogRatio(f"beta = alpha^({p}/{q})")
    target = _log_ratio(alpha, beta)
    terms = 8
    while True:
        try:
            cf = cf_expand(target, terms, strict=True)
        except CFPrecisionExhausted as exc:
            cf = exc.prefix
            if cf is None:
                raise CFTooShort("no certified partial quotient") from exc
            exhausted = True
        else:
            exhausted = False
        qs = cf.quotients
        n = next((j for j in range(1, len(qs) - 1) if qs[j + 1] >= m), None)
        if n is not None:
            break
        if exhausted or terms >= max_terms:
            raise CFTooShort(f"no a_(n+1) >= {m} among {len(qs)} certified quotients")
        terms *= 2
    conv = convergents(cf)
    p_prev, q_prev = (conv[n - 1].p, conv[n - 1].q)
    p_n, q_n = conv[n].p, conv[n].q
    a_next = qs[n + 1]
    pts = [(p_prev + i * p_n, q_prev + i * q_n) for i in range(a_next + 1)]
    spec = LatticeSpec.rectangular(alpha, beta)
    return _certified("semiconvergent", spec, pts, {
        "alpha": format_scalar(alpha), "beta": format_scalar(beta), "m": m,
        "n": n, "a_next": a_next, "cf_prefix": str(cf),
    })


def convergent_polygon(alpha: Scalar, r: Scalar, count: int,
                       n0_cap: int = N0_CAP) -> ConstructionReport:
    """Points (alpha^p_n, beta^q_n), beta = alpha^r, over consecutive odd n from the least n0 that certifies."""
    _base_check(alpha)
    if count < 3:
        raise PreconditionViolated("count must be at least 3")
    if not isinstance(r, QuadraticSurd):
        raise PreconditionViolated("r must be an irrational quadratic surd")
    if compare(r, 0) is not Ordering.GREATER:
        raise PreconditionViolated("r must be positive")
    beta = CertifiedReal.rpow(alpha, r)
    spec = LatticeSpec.rectangular(alpha, beta)
    cf = cf_expand(r, n0_cap + 2 * count + 2)
    conv = convergents(cf)
    for n0 in range(1, n0_cap + 1, 2):
        idx = [n0 + 2 * j for j in range(count)]
        pts = [(conv[i].p, conv[i].q) for i in idx]
        got = _try_certify(spec, pts)
        if got is not None:
            polygon, cert = got
            return ConstructionReport("convergent", polygon, {
                "alpha": format_scalar(alpha), "r": format_scalar(r),
                "beta": format_scalar(beta), "count": count, "n0": n0,
            }, cert)
    raise SearchExhausted(f"no odd n0 <= {n0_cap} certifies")
