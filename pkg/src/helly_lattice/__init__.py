"""Exact search and certification of empty convex polygons in exponential lattices."""
from .bounds import (
    BoundReport,
    RelationUndecided,
    ceil_log,
    edge_type_budget,
    lower_bound_h,
    rect_bounds,
    upper_bound_h,
)
from .constructions import (
    ConstructionReport,
    convergent_polygon,
    fibonacci_polygon,
    five_point,
    hyperbola,
    rational_beta_polygon,
    semiconvergent_polygon,
    seven_point,
)
from .contfrac import best_one_sided, brute_force_best_one_sided, cf_expand, convergents
from .kernel import (
    CertificationFailed,
    EdgeType,
    Orientation,
    Polygon,
    classify_edge,
    edge_type_counts,
    is_convex_position,
    is_empty_polygon,
    orient,
)
from .lattice import LatticePoint, LatticeSpec, Window, coordinate, enumerate_points, parse_lattice
from .scalar import PrecisionExhausted, compare, parse_scalar, pow_int
from .search import SearchConfig, SearchResult, cross_validate, max_empty_polygon

__version__ = "0.1.0"
