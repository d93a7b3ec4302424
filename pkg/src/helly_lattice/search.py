"""Largest empty convex polygon over a finite lattice window.

A window is exact for the whole lattice: coordinates are monotone in the
indices, so any lattice point inside the hull of window points has its
indices inside the window as well.

Two engines are provided.  ``dp`` anchors every polygon at its lowest
(then leftmost) vertex and runs the empty-convex-chain dynamic program on
an exact orientation table.  ``naive`` extends convex chains depth first
with the generic predicate and brute-force containment; it exists to check
the first one.  Both break ties identically: among maximum solutions the
lexicographically smallest sorted vertex list wins.
"""
from __future__ import annotations

import enum
import functools
import os
import time
from concurrent.futures import ProcessPoolExecutor
from concurrent.futures import TimeoutError as FuturesTimeout
from dataclasses import dataclass, field

import numpy as np

from .kernel import (
    EmptinessCertificate,
    Orientation,
    Polygon,
    is_empty_polygon,
    orient,
    orientation_table,
)
from .lattice import LatticePoint, LatticeSpec, Window, enumerate_points

__all__ = [
    "Algorithm",
    "SearchConfig",
    "SearchResult",
    "WindowTooLargeForNaive",
    "cross_validate",
    "max_empty_polygon",
]

NAIVE_CAP = 49


class Algorithm(str, enum.Enum):
    NAIVE = "naive"
    DP = "dp"


class WindowTooLargeForNaive(ValueError):
    pass


@dataclass(frozen=True)
class SearchConfig:
    window: Window
    algorithm: Algorithm = Algorithm.DP
    jobs: int = 1
    naive_cap: int = NAIVE_CAP
    time_budget: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "algorithm", Algorithm(self.algorithm))
        if self.jobs < 1:
            raise ValueError("jobs must be positive")


@dataclass(frozen=True)
class SearchResult:
    spec: LatticeSpec
    window: Window
    algorithm: Algorithm
    cardinality: int
    best: Polygon | None
    examined: int
    elapsed: float
    optimal: bool = True
    certificate: EmptinessCertificate | None = None
    stats: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.best is not None and len(self.best) != self.cardinality:
            raise ValueError("cardinality does not match the best polygon")


def _window_points(spec: LatticeSpec, window: Window) -> list[LatticePoint]:
    """Window points with duplicate coordinates collapsed, in lexicographic order."""
    seen = {}
    for p in enumerate_points(spec, window):
        key = (spec.canonical_index(0, p.u), spec.canonical_index(1, p.v))
        seen.setdefault(key, LatticePoint(*key))
    return sorted(seen.values())


def _above(a: LatticePoint, b: LatticePoint) -> bool:
    """b comes after a in the (row, column) order used for anchors."""
    return b.v > a.v or (b.v == a.v and b.u > a.u)


def _angular_order(points, anchor_idx: int, cand: list[int], sign) -> list[int]:
    a = points[anchor_idx]

    def cmp(i, j):
        s = sign(anchor_idx, i, j)
        if s:
            return -s
        # same ray from the anchor: nearer point first
        ki = (points[i].v, abs(points[i].u - a.u))
        kj = (points[j].v, abs(points[j].u - a.u))
        return (ki > kj) - (ki < kj)

    return sorted(cand, key=functools.cmp_to_key(cmp))


def _mask(ranks) -> int:
    return sum(1 << r for r in ranks)


# -- dynamic program


_TABLE = None
_POINTS = None


def _init_worker(table, points):
    global _TABLE, _POINTS
    _TABLE, _POINTS = table, points


def _anchor_dp(a: int):
    """(best size, tie mask, vertex list, states) for polygons anchored at point a."""
    O, points = _TABLE, _POINTS
    n = len(points)
    cand = [b for b in range(n) if _above(points[a], points[b])]
    if len(cand) < 2:
        return 0, 0, None, 0
    cand = _angular_order(points, a, cand, lambda x, y, z: int(O[x, y, z]))
    C = np.array(cand)
    m = len(C)
    A = O[a][np.ix_(C, C)].astype(np.int8)          # A[i, k] = orient(a, i, k)
    B = O[np.ix_(C, C, C)]                           # B[i, j, k] = orient(i, j, k)
    inside = (A[:, None, :] >= 0) & (B >= 0) & (A[None, :, :] <= 0)
    idx = np.arange(m)
    inside[idx, :, idx] = False
    inside[:, idx, idx] = False
    upper = np.triu(np.ones((m, m), dtype=bool), 1)
    ok = upper & (A > 0) & ~inside.any(axis=2)       # fan triangle (a, i, j) is empty
    g = np.zeros((m, m), dtype=np.int32)
    for i in range(m):
        row = np.where(ok[i], 3, 0)
        if i:
            prev = g[:i, i]
            turn = B[:i, i, :] > 0                   # left turn h -> i -> j
            ext = np.where(turn & (prev[:, None] > 0), prev[:, None] + 1, 0).max(axis=0)
            row = np.where(ok[i], np.maximum(row, ext), 0)
        g[i] = row
    close = (O[np.ix_(C, C)][:, :, a] > 0) & (g > 0)  # turn j -> a is left
    if not close.any():
        return 0, 0, None, int((g > 0).sum())
    best = int(g[close].max())

    rank = {b: n - 1 - b for b in range(n)}  # points are in lexicographic order

    @functools.lru_cache(maxsize=None)
    def best_mask(i, j):
        L = g[i, j]
        bit = 1 << rank[cand[j]]
        if L == 3:
            return (1 << rank[a]) | (1 << rank[cand[i]]) | bit, (i,)
        top = None
        for h in range(i):
            if g[h, i] == L - 1 and B[h, i, j] > 0:
                got = best_mask(h, i)
                if top is None or got[0] > top[0]:
                    top = got
        return top[0] | bit, top[1] + (i,)

    winner = None
    for i, j in zip(*np.nonzero(close & (g == best))):
        mask, chain = best_mask(int(i), int(j))
        if winner is None or mask > winner[0]:
            winner = (mask, chain + (int(j),))
    verts = [points[a]] + [points[cand[k]] for k in winner[1]]
    return best, winner[0], verts, int((g > 0).sum())


def _run_dp(spec, points, cfg, deadline):
    table = orientation_table(spec, points)
    anchors = list(range(len(points)))
    results = []
    optimal = True
    if cfg.jobs > 1 and len(anchors) > 1:
        with ProcessPoolExecutor(cfg.jobs, initializer=_init_worker, initargs=(table, points)) as ex:
            futures = [ex.submit(_anchor_dp, a) for a in anchors]
            for f in futures:
                remaining = None if deadline is None else max(0.0, deadline - time.monotonic())
                try:
                    results.append(f.result(timeout=remaining))
                except FuturesTimeout:
                    optimal = False
                    for g in futures:
                        g.cancel()
                    break
    else:
        _init_worker(table, points)
        for a in anchors:
            if deadline is not None and time.monotonic() > deadline:
                optimal = False
                break
            results.append(_anchor_dp(a))
    return results, optimal


# -- naive oracle


def _run_naive(spec, points, cfg, deadline):
    n = len(points)
    if n > cfg.naive_cap:
        raise WindowTooLargeForNaive(f"{n} points exceed the naive cap of {cfg.naive_cap}")

    @functools.lru_cache(maxsize=None)
    def sign(i, j, k):
        return int(orient(spec, points[i], points[j], points[k]))

    def in_closed(poly, k):
        return all(sign(poly[t], poly[(t + 1) % len(poly)], k) >= 0 for t in range(len(poly)))

    results = []
    optimal = True
    for a in range(n):
        if deadline is not None and time.monotonic() > deadline:
            optimal = False
            break
        cand = [b for b in range(n) if _above(points[a], points[b])]
        cand = _angular_order(points, a, cand, sign)
        state = {"best": 0, "mask": 0, "verts": None, "examined": 0}

        def consider(chain):
            size = len(chain)
            mask = _mask(n - 1 - c for c in chain)
            if size > state["best"] or (size == state["best"] and mask > state["mask"]):
                state.update(best=size, mask=mask, verts=[points[c] for c in chain])

        def extend(chain, pos):
            for t in range(pos, len(cand)):
                if len(chain) + len(cand) - t < state["best"]:
                    return
                c = cand[t]
                if len(chain) >= 2 and sign(chain[-2], chain[-1], c) <= 0:
                    continue
                new = chain + [c]
                if len(new) >= 3:
                    if sign(new[-2], new[-1], a) <= 0 or sign(new[-1], a, new[1]) <= 0:
                        continue
                    members = set(new)
                    if any(in_closed(new, k) for k in range(n) if k not in members):
                        continue
                    state["examined"] += 1
                    consider(new)
                extend(new, t + 1)

        extend([a], 0)
        results.append((state["best"], state["mask"], state["verts"], state["examined"]))
    return results, optimal


def max_empty_polygon(spec: LatticeSpec, cfg: SearchConfig) -> SearchResult:
    """Maximum empty convex polygon with vertices in the window."""
    if cfg.window.size == 0:
        raise ValueError("empty window")
    start = time.monotonic()
    deadline = None if cfg.time_budget is None else start + cfg.time_budget
    points = _window_points(spec, cfg.window)
    runner = _run_dp if cfg.algorithm is Algorithm.DP else _run_naive
    if len(points) < 3:
        return SearchResult(spec, cfg.window, cfg.algorithm, len(points), None, 0,
                            time.monotonic() - start, True, None, {"points": len(points)})
    results, optimal = runner(spec, points, cfg, deadline)
    best_size, best_mask, best_verts = 0, 0, None
    examined = 0
    for size, mask, verts, count in results:
        examined += count
        if size > best_size or (size == best_size and mask > best_mask):
            best_size, best_mask, best_verts = size, mask, verts
    elapsed = time.monotonic() - start
    stats = {"points": len(points), "anchors": len(results)}
    if best_verts is None:
        # all window points collinear: the best convex set is a segment
        return SearchResult(spec, cfg.window, cfg.algorithm, min(2, len(points)), None,
                            examined, elapsed, optimal, None, stats)
    polygon = Polygon(spec, tuple(best_verts))
    cert = is_empty_polygon(polygon)
    if not cert.empty:
        raise AssertionError(f"search produced a non-empty polygon, witness {cert.witness}")
    return SearchResult(spec, cfg.window, cfg.algorithm, best_size, polygon, examined,
                        time.monotonic() - start, optimal, cert, stats)


def cross_validate(spec: LatticeSpec, window: Window) -> bool:
    """Naive and DP agree on the cardinality and, through the tie-break, on the polygon."""
    naive = max_empty_polygon(spec, SearchConfig(window, Algorithm.NAIVE))
    dp = max_empty_polygon(spec, SearchConfig(window, Algorithm.DP))
    same_poly = (naive.best is None and dp.best is None) or (
        naive.best is not None and dp.best is not None and naive.best.vertices == dp.best.vertices)
    return naive.cardinality == dp.cardinality and same_poly
