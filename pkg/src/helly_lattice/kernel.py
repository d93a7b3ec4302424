"""Exact planar predicates on lattice points.

All predicates work on index pairs and reduce to exact scalar arithmetic.
Coordinate differences between points sharing a row or column are exactly
zero by construction, which keeps certified-real lattices decidable on the
degenerate configurations that occur all the time in product sets.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .lattice import LatticePoint, LatticeSpec
from .scalar import (
    Ordering,
    QuadraticSurd,
    Scalar,
    arith,
    compare,
    track_precision,
)

__all__ = [
    "CertificationFailed",
    "EdgeType",
    "EmptinessCertificate",
    "Orientation",
    "Polygon",
    "classify_edge",
    "convex_hull",
    "edge_type_counts",
    "is_convex_position",
    "is_empty_polygon",
    "orient",
    "orientation_table",
]


class Orientation(enum.IntEnum):
    CW = -1
    COLLINEAR = 0
    CCW = 1


class EdgeType(str, enum.Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"


class CertificationFailed(ValueError):
    """A polygon failed its convexity or emptiness check."""


def _delta(spec: LatticeSpec, axis: int, i: int, j: int) -> Scalar:
    if spec.canonical_index(axis, i) == spec.canonical_index(axis, j):
        return 0
    return spec.value(axis, j) - spec.value(axis, i)


def orient(spec: LatticeSpec, p, q, r) -> Orientation:
    """Sign of det(q - p, r - p) in exact arithmetic."""
    dx1 = _delta(spec, 0, p[0], q[0])
    dy1 = _delta(spec, 1, p[1], q[1])
    dx2 = _delta(spec, 0, p[0], r[0])
    dy2 = _delta(spec, 1, p[1], r[1])
    left = 0 if (dx1 == 0 or dy2 == 0) else dx1 * dy2
    right = 0 if (dy1 == 0 or dx2 == 0) else dy1 * dx2
    return Orientation(int(compare(left, right)))


def _index_sign(spec: LatticeSpec, axis: int, i: int, j: int) -> int:
    """Sign of coordinate(j) - coordinate(i); coordinates increase with the index."""
    ci, cj = spec.canonical_index(axis, i), spec.canonical_index(axis, j)
    return (cj > ci) - (cj < ci)


def convex_hull(spec: LatticeSpec, points: Sequence) -> list[LatticePoint]:
    """Strict hull vertices in counterclockwise order (monotone chain)."""
    pts = sorted({(spec.canonical_index(0, p[0]), spec.canonical_index(1, p[1])): LatticePoint(*p)
                  for p in points}.items())
    pts = [p for _, p in pts]
    if len(pts) < 3:
        return pts

    def half(seq):
        chain: list = []
        for p in seq:
            while len(chain) >= 2 and orient(spec, chain[-2], chain[-1], p) is not Orientation.CCW:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(reversed(pts))
    return lower[:-1] + upper[:-1]


def is_convex_position(spec: LatticeSpec, points: Sequence) -> bool:
    """True iff every point is a vertex of a strictly convex hull."""
    if len(points) < 3:
        raise ValueError("convex position needs at least three points")
    canon = {(spec.canonical_index(0, p[0]), spec.canonical_index(1, p[1])) for p in points}
    if len(canon) != len(points):
        return False
    return len(convex_hull(spec, points)) == len(points)


@dataclass(frozen=True)
class EmptinessCertificate:
    witness: LatticePoint | None
    rows_swept: int
    precision_bits: int

    @property
    def empty(self) -> bool:
        return self.witness is None

    @property
    def verdict(self) -> str:
        return "empty" if self.witness is None else "witness"


@dataclass(frozen=True)
class Polygon:
    """Strictly convex lattice polygon with vertices listed counterclockwise."""

    spec: LatticeSpec
    vertices: tuple[LatticePoint, ...]
    _coords: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        verts = tuple(LatticePoint(int(u), int(v)) for u, v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        n = len(verts)
        if n < 3:
            raise CertificationFailed("a polygon needs at least three vertices")
        canon = {(self.spec.canonical_index(0, u), self.spec.canonical_index(1, v)) for u, v in verts}
        if len(canon) != n:
            raise CertificationFailed("repeated vertex")
        for k in range(n):
            a, b, c = verts[k], verts[(k + 1) % n], verts[(k + 2) % n]
            if orient(self.spec, a, b, c) is not Orientation.CCW:
                raise CertificationFailed(f"vertices {a}, {b}, {c} do not turn left")
        for k in range(1, n - 1):
            if orient(self.spec, verts[0], verts[k], verts[k + 1]) is not Orientation.CCW:
                raise CertificationFailed("vertex order winds more than once")

    @classmethod
    def from_points(cls, spec: LatticeSpec, points: Sequence) -> Polygon:
        """Order ``points`` counterclockwise; fails unless they are in convex position."""
        pts = [LatticePoint(*p) for p in points]
        if len(pts) < 3 or not is_convex_position(spec, pts):
            raise CertificationFailed("points are not in strictly convex position")
        return cls(spec, tuple(convex_hull(spec, pts)))

    def __len__(self) -> int:
        return len(self.vertices)

    def coord(self, p) -> tuple[Scalar, Scalar]:
        got = self._coords.get(p)
        if got is None:
            got = (self.spec.value(0, p[0]), self.spec.value(1, p[1]))
            self._coords[p] = got
        return got

    def sorted_vertices(self) -> tuple[LatticePoint, ...]:
        return tuple(sorted(self.vertices))


def classify_edge(polygon: Polygon, k: int) -> EdgeType:
    """Type of the edge from vertex ``k`` to vertex ``k+1``."""
    spec = polygon.spec
    n = len(polygon)
    a, b = polygon.vertices[k % n], polygon.vertices[(k + 1) % n]
    w = polygon.vertices[(k + 2) % n]
    sx = _index_sign(spec, 0, a[0], b[0])
    sy = _index_sign(spec, 1, a[1], b[1])
    # orient u -> v with x(u) < x(v), or y(u) < y(v) on a vertical edge
    if sx < 0 or (sx == 0 and sy < 0):
        a, b, sx, sy = b, a, -sx, -sy
    side = orient(spec, a, b, w)  # CCW: polygon to the left of a -> b
    if sy == 0:
        below = _index_sign(spec, 1, a[1], w[1]) < 0
        return EdgeType.II if below else EdgeType.III
    if sx == 0:
        return EdgeType.IV if side is Orientation.CCW else EdgeType.III
    if side is Orientation.CW:
        return EdgeType.I if sy < 0 else EdgeType.II
    return EdgeType.III if sy < 0 else EdgeType.IV


def edge_type_counts(polygon: Polygon) -> dict[EdgeType, int]:
    counts = {t: 0 for t in EdgeType}
    for k in range(len(polygon)):
        counts[classify_edge(polygon, k)] += 1
    return counts


def edge_types(polygon: Polygon) -> list[EdgeType]:
    return [classify_edge(polygon, k) for k in range(len(polygon))]


# -- emptiness by row sweep


def _bound_cmp(spec: LatticeSpec, a, b) -> int:
    """Compare boundary abscissae given as ('idx', u) or ('val', scalar)."""
    if a[0] == "idx" and b[0] == "idx":
        return _index_sign(spec, 0, b[1], a[1])
    va = spec.value(0, a[1]) if a[0] == "idx" else a[1]
    vb = spec.value(0, b[1]) if b[0] == "idx" else b[1]
    return int(compare(va, vb))


def _row_extent(polygon: Polygon, v: int):
    """Left and right boundary of the polygon on row ``v``, or None."""
    spec = polygon.spec
    cv = spec.canonical_index(1, v)
    verts = polygon.vertices
    n = len(verts)
    hits = []
    for k in range(n):
        a, b = verts[k], verts[(k + 1) % n]
        ca, cb = spec.canonical_index(1, a[1]), spec.canonical_index(1, b[1])
        if ca == cv:
            hits.append(("idx", a[0]))
        if cb == cv:
            hits.append(("idx", b[0]))
        if min(ca, cb) < cv < max(ca, cb):
            xa, ya = polygon.coord(a)
            xb, yb = polygon.coord(b)
            y = spec.value(1, v)
            if xa == xb or spec.canonical_index(0, a[0]) == spec.canonical_index(0, b[0]):
                hits.append(("idx", a[0]))
            else:
                hits.append(("val", xa + arith("div", (y - ya) * (xb - xa), yb - ya)))
    if not hits:
        return None
    lo = hi = hits[0]
    for h in hits[1:]:
        if _bound_cmp(spec, h, lo) < 0:
            lo = h
        if _bound_cmp(spec, h, hi) > 0:
            hi = h
    return lo, hi


def is_empty_polygon(polygon: Polygon) -> EmptinessCertificate:
    """Sweep every lattice row meeting the closed polygon.

    For each row the boundary abscissae are computed exactly and converted
    to a column index range; any non-vertex lattice point in that range is a
    witness.  Rows are visited bottom-up.  A strictly interior witness is
    preferred over one on the boundary; among those of the same kind the
    lowest row, then the leftmost column, wins.
    """
    spec = polygon.spec
    verts = polygon.vertices
    vertex_set = {(spec.canonical_index(0, u), spec.canonical_index(1, v)) for u, v in verts}
    vs = [spec.canonical_index(1, p[1]) for p in verts]
    rows_swept = 0
    boundary_witness = None
    with track_precision() as box:
        if spec.is_exponential:
            rows = range(min(vs), max(vs) + 1)
        else:
            ys = [spec.value(1, p[1]) for p in verts]
            rows = spec.index_range(1, min(ys), max(ys))
        top, bottom = max(vs), min(vs)
        seen = set()
        for v in rows:
            cv = spec.canonical_index(1, v)
            if cv in seen:
                continue
            seen.add(cv)
            rows_swept += 1
            extent = _row_extent(polygon, v)
            if extent is None:
                continue
            lo, hi = extent
            lo_val = spec.value(0, lo[1]) if lo[0] == "idx" else lo[1]
            hi_val = spec.value(0, hi[1]) if hi[0] == "idx" else hi[1]
            first = lo[1] if lo[0] == "idx" else spec.first_index(0, lo_val)
            last = hi[1] if hi[0] == "idx" else spec.last_index(0, hi_val)
            if bottom < cv < top:
                inner_first = spec.first_index(0, lo_val, strict=True)
                inner_last = spec.last_index(0, hi_val, strict=True)
                if inner_first <= inner_last:
                    return EmptinessCertificate(
                        LatticePoint(spec.canonical_index(0, inner_first), cv), rows_swept, box[0])
            if boundary_witness is None:
                for u in range(first, last + 1):
                    cu = spec.canonical_index(0, u)
                    if (cu, cv) not in vertex_set:
                        boundary_witness = LatticePoint(cu, cv)
                        break
    return EmptinessCertificate(boundary_witness, rows_swept, box[0])


def certify(polygon: Polygon) -> EmptinessCertificate:
    """Emptiness certificate, raising CertificationFailed on a witness."""
    cert = is_empty_polygon(polygon)
    if not cert.empty:
        raise CertificationFailed(f"lattice point {tuple(cert.witness)} lies in the polygon")
    return cert


# -- vectorised orientation table for the search engine


def _axis_embedding(values):
    """Integer numerators (A, B), d such that value_k = (A_k + B_k sqrt d) / D."""
    d = 0
    for x in values:
        if isinstance(x, QuadraticSurd):
            if d and x.d != d:
                return None
            d = x.d
        elif not isinstance(x, (int, Fraction)):
            return None
    parts = []
    for x in values:
        if isinstance(x, QuadraticSurd):
            parts.append((Fraction(x.a), Fraction(x.b)))
        else:
            parts.append((Fraction(x), Fraction(0)))
    den = 1
    for a, b in parts:
        den = math.lcm(den, a.denominator, b.denominator)
    A = [int(a * den) for a, _ in parts]
    B = [int(b * den) for _, b in parts]
    return A, B, d


def _sign_of(P, Q, d):
    sp = (P > 0).astype(np.int8) - (P < 0).astype(np.int8)
    if d == 0:
        return sp
    sq = (Q > 0).astype(np.int8) - (Q < 0).astype(np.int8)
    mag = P * P - Q * Q * d
    sm = (mag > 0).astype(np.int8) - (mag < 0).astype(np.int8)
    # same signs or one zero: the nonzero one decides; opposite: magnitude test
    out = np.where(sq == 0, sp, np.where(sp == 0, sq, np.where(sp == sq, sp, np.where(sm > 0, sp, sq))))
    return out.astype(np.int8)


def orientation_table(spec: LatticeSpec, points: Sequence) -> np.ndarray:
    """``T[a, b, c]`` = orientation sign of (points[a], points[b], points[c]).

    Coordinates are embedded as integers (or integer pairs over one quadratic
    field) so the whole table is computed with exact integer arithmetic;
    other lattices fall back to per-triple :func:`orient`.
    """
    n = len(points)
    xs = [spec.value(0, p[0]) for p in points]
    ys = [spec.value(1, p[1]) for p in points]
    ex, ey = _axis_embedding(xs), _axis_embedding(ys)
    if ex is None or ey is None or (ex[2] and ey[2] and ex[2] != ey[2]):
        return _orientation_table_slow(spec, points)
    d = ex[2] or ey[2]
    bound = max(max(map(abs, ex[0] + ex[1] + ey[0] + ey[1]), default=0), 1)
    pmax = 8 * bound * bound * (1 + d)
    fits = pmax < 2 ** 62 if d == 0 else (pmax * pmax * (d + 1) < 2 ** 62)
    dtype = np.int64 if fits else object
    XA, XB = np.array(ex[0], dtype=dtype), np.array(ex[1], dtype=dtype)
    YA, YB = np.array(ey[0], dtype=dtype), np.array(ey[1], dtype=dtype)
    table = np.zeros((n, n, n), dtype=np.int8)
    for a in range(n):
        dxa = XA - XA[a]
        dxb = XB - XB[a]
        dya = YA - YA[a]
        dyb = YB - YB[a]
        # det = dx[b]*dy[c] - dy[b]*dx[c] over Z[sqrt d]
        P = (np.multiply.outer(dxa, dya) + d * np.multiply.outer(dxb, dyb)
             - np.multiply.outer(dya, dxa) - d * np.multiply.outer(dyb, dxb))
        Q = (np.multiply.outer(dxa, dyb) + np.multiply.outer(dxb, dya)
             - np.multiply.outer(dya, dxb) - np.multiply.outer(dyb, dxa))
        table[a] = _sign_of(P, Q, d)
    return table


def _orientation_table_slow(spec: LatticeSpec, points: Sequence) -> np.ndarray:
    n = len(points)
    table = np.zeros((n, n, n), dtype=np.int8)
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                s = int(orient(spec, points[a], points[b], points[c]))
                for (i, j, k), sg in (((a, b, c), s), ((b, c, a), s), ((c, a, b), s),
                                      ((b, a, c), -s), ((a, c, b), -s), ((c, b, a), -s)):
                    table[i, j, k] = sg
    return table
