"""Versioned JSON documents for polygons, search results and bound reports.

Everything outside the ``metadata`` block is a deterministic function of
the inputs; timestamps and timings live in ``metadata`` only.
"""
from __future__ import annotations

import datetime as _dt
import json
import math
from typing import Any

from .bounds import BoundReport
from .constructions import ConstructionReport
from .kernel import EmptinessCertificate, Polygon
from .lattice import LatticePoint, LatticeSpec, Window, parse_lattice
from .search import SearchResult

__all__ = [
    "POLYGON_FORMAT",
    "SEARCH_FORMAT",
    "BOUNDS_FORMAT",
    "DocumentError",
    "bounds_document",
    "construction_document",
    "dumps",
    "load_polygon",
    "loads",
    "polygon_document",
    "search_document",
    "strip_metadata",
]

POLYGON_FORMAT = "helly-lattice/polygon@1"
SEARCH_FORMAT = "helly-lattice/search@1"
BOUNDS_FORMAT = "helly-lattice/bounds@1"


class DocumentError(ValueError):
    pass


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def certificate_block(cert: EmptinessCertificate) -> dict:
    return {
        "verdict": cert.verdict,
        "witness": None if cert.witness is None else list(cert.witness),
        "rows_swept": cert.rows_swept,
        "precision_bits": cert.precision_bits,
    }


def polygon_document(polygon: Polygon, cert: EmptinessCertificate | None = None,
                     construction: dict | None = None, metadata: dict | None = None) -> dict:
    doc: dict[str, Any] = {
        "format": POLYGON_FORMAT,
        "lattice": str(polygon.spec),
        "vertices": [[p.u, p.v] for p in polygon.vertices],
    }
    if cert is not None:
        doc["certificate"] = certificate_block(cert)
    if construction is not None:
        doc["construction"] = construction
    doc["metadata"] = {"created": _now(), **(metadata or {})}
    return doc


def construction_document(report: ConstructionReport) -> dict:
    return polygon_document(report.polygon, report.certificate, report.metadata())


def search_document(result: SearchResult) -> dict:
    w = result.window
    return {
        "format": SEARCH_FORMAT,
        "lattice": str(result.spec),
        "window": {"u_min": w.u_min, "u_max": w.u_max, "v_min": w.v_min, "v_max": w.v_max},
        "algorithm": result.algorithm.value,
        "cardinality": result.cardinality,
        "optimal": result.optimal,
        "examined": result.examined,
        "polygon": None if result.best is None else {
            "lattice": str(result.spec),
            "vertices": [[p.u, p.v] for p in result.best.vertices],
            "certificate": certificate_block(result.certificate),
        },
        "metadata": {"created": _now(), "elapsed_seconds": round(result.elapsed, 6),
                     **result.stats},
    }


def _bound(x):
    return "infinite" if x == math.inf else x


def bounds_document(report: BoundReport, alpha: str, beta: str | None = None) -> dict:
    doc: dict[str, Any] = {"format": BOUNDS_FORMAT, "alpha": alpha}
    if beta is not None:
        doc["beta"] = beta
    doc.update({
        "lower": _bound(report.lower),
        "upper": _bound(report.upper),
        "regime": report.regime,
        "quantities": report.quantities,
        "metadata": {"created": _now()},
    })
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"not a JSON document: {exc}") from None
    if not isinstance(doc, dict) or "format" not in doc:
        raise DocumentError("document has no format field")
    return doc


def strip_metadata(doc: dict) -> dict:
    """Copy without the metadata block, for determinism comparisons."""
    return {k: v for k, v in doc.items() if k != "metadata"}


def load_polygon(doc: dict) -> Polygon:
    """Polygon from a polygon document, or from the best polygon of a search document."""
    fmt = doc.get("format")
    if fmt == SEARCH_FORMAT:
        doc = doc.get("polygon")
        if doc is None:
            raise DocumentError("search document holds no polygon")
    elif fmt != POLYGON_FORMAT:
        raise DocumentError(f"unsupported format {fmt!r}")
    try:
        spec = parse_lattice(doc["lattice"])
        verts = tuple(LatticePoint(int(u), int(v)) for u, v in doc["vertices"])
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"malformed polygon document: {exc}") from None
    return Polygon(spec, verts)
