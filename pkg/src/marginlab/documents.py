"""Input and output file formats: loss documents, report documents, and
barycentric plot-data documents.

All formats are JSON with every rational carried as a canonical string
("p/q", an integer literal, or an exact decimal on input).  Binary
floats are rejected on input so exactness survives the round trip, and
serialization is canonical (sorted keys, fixed layout), so identical
analyses produce byte-identical documents.
"""
from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from functools import cmp_to_key

from .consistency import ConsistencyReport, ReportConfig
from .errors import StructuralError
from .losses import LossMatrix, basis_point, loss_matrix, pair_midpoint
from .polytopes import prediction_set
from .rationals import HALF, ZERO, Rational, rat, rational_str

LOSS_FORMAT = "margin-loss/1"
REPORT_FORMAT = "margin-report/1"
GEOMETRY_FORMAT = "margin-geometry/1"

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/[1-9]\d*|\.\d+)?$")


class ParseError(ValueError):
    """Malformed document; carries a human-readable position."""

    def __init__(self, message: str, position: str | None = None):
        self.position = position
        super().__init__(message if position is None else f"{position}: {message}")


def parse_rational_literal(token) -> Rational:
    """Exact rational from an integer or a string literal.

    Strings may be integers, fractions "p/q", or decimals with an exact
    power-of-ten denominator.  Anything else, floats included, is an error.
    """
    if isinstance(token, bool) or isinstance(token, float):
        raise ParseError(f"not an exact rational literal: {token!r}")
    if isinstance(token, int):
        return rat(token)
    if not isinstance(token, str) or not _RATIONAL_RE.match(token):
        raise ParseError(f"not an exact rational literal: {token!r}")
    return rat(token)


def _reject_float(text: str):
    raise ParseError(f"binary floating-point literal rejected: {text!r}")


@dataclass(frozen=True)
class LossDocument:
    name: str
    loss: LossMatrix
    labels: tuple | None = None


def parse_loss_document(text: str) -> LossDocument:
    try:
        raw = json.loads(text, parse_float=_reject_float)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ParseError("document must be a JSON object")
    if raw.get("format") != LOSS_FORMAT:
        raise ParseError(f'expected "format": "{LOSS_FORMAT}"')
    name = raw.get("name")
    if not isinstance(name, str) or not name:
        raise ParseError('missing or empty "name"')
    k = raw.get("k")
    entries = raw.get("entries")
    if not isinstance(k, int) or k < 2:
        raise ParseError('"k" must be an integer >= 2')
    if not isinstance(entries, list) or len(entries) != k:
        raise ParseError(f'"entries" must be a {k}x{k} array')
    parsed = []
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != k:
            raise ParseError(f"row {i + 1} must have {k} entries")
        out = []
        for j, token in enumerate(row):
            try:
                out.append(parse_rational_literal(token))
            except ParseError as exc:
                raise ParseError(str(exc), position=f"entry ({i + 1},{j + 1})") from exc
        parsed.append(out)
    try:
        loss = loss_matrix(parsed)
    except StructuralError as exc:
        raise ParseError(f"loss matrix invariant violated: {exc}") from exc
    labels = raw.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or len(labels) != k or not all(
            isinstance(x, str) for x in labels
        ):
            raise ParseError(f'"labels" must be an array of {k} strings')
        labels = tuple(labels)
    return LossDocument(name=name, loss=loss, labels=labels)


def loss_document_json(doc: LossDocument) -> str:
    body = {
        "format": LOSS_FORMAT,
        "name": doc.name,
        "k": doc.loss.k,
        "entries": [[rational_str(x) for x in row] for row in doc.loss.entries],
    }
    if doc.labels is not None:
        body["labels"] = list(doc.labels)
    return json.dumps(body, sort_keys=True, indent=2) + "\n"


def loss_document_digest(doc: LossDocument) -> str:
    return hashlib.sha256(loss_document_json(doc).encode()).hexdigest()


# ---------------------------------------------------------------------------
# Report document


def _point(values) -> list:
    return [rational_str(x) for x in values]


def _matrix(rows) -> list:
    return [[rational_str(x) for x in row] for row in rows]


def _report_body(report: ConsistencyReport) -> dict:
    dist = report.distance
    body: dict = {
        "k": report.k,
        "symmetric": report.symmetric,
        "distance": {
            "is_distance": dist.is_distance,
            "violation": None
            if dist.violation is None
            else {
                "kind": dist.violation[0],
                "outputs": [i + 1 for i in dist.violation[1]],
                "values": [rational_str(x) for x in dist.violation[2:]],
            },
        },
    }
    nec = report.necessary
    if nec is None:
        body["necessary_condition"] = {"applicable": False}
    else:
        entry: dict = {
            "applicable": True,
            "holds": nec.holds,
            "vacuous": nec.vacuous,
            "is_distance": nec.is_distance,
        }
        if nec.violating_triple is not None:
            entry["violating_triple"] = [y + 1 for y in nec.violating_triple]
            entry["pivot_failures"] = [
                {
                    "z": f.z + 1,
                    "identity": f.identity,
                    "lhs": rational_str(f.lhs),
                    "rhs": rational_str(f.rhs),
                }
                for f in nec.z_failures
            ]
        body["necessary_condition"] = entry
    tree = report.tree
    body["tree"] = {
        "certified": tree.certified,
        "reason": tree.reason,
        "edges": None
        if tree.certificate is None
        else [[u + 1, v + 1, rational_str(w)] for u, v, w in tree.certificate.edges],
    }
    body["rm_simple_sufficient"] = {
        "holds": report.rm_simple.holds,
        "minima": _point(report.rm_simple.minima),
        "witnesses": [_point(p) for p in report.rm_simple.witnesses],
    }
    body["a1"] = {
        "status": report.a1.status,
        "violation": None
        if report.a1.violation is None
        else {
            "vertex": _point(report.a1.violation[0]),
            "source_prediction_set": report.a1.violation[1] + 1,
            "failing_output": report.a1.violation[2] + 1,
        },
        "reason": report.a1.reason,
    }
    body["dominant_label_identity"] = {
        "applicable": report.dominant.applicable,
        "verified": report.dominant.verified,
        "points_checked": report.dominant.points_checked,
    }
    body["embedding_checks"] = dict(sorted(report.embedding.items()))
    body["verdicts"] = {
        name: {"verdict": v.status, "justification": list(v.justification)}
        for name, v in sorted(report.verdicts.items())
    }
    return body


def report_document_json(
    report: ConsistencyReport,
    doc: LossDocument,
    config: ReportConfig,
    version: str,
) -> str:
    body = {
        "format": REPORT_FORMAT,
        "tool": {"name": "marginlab", "version": version},
        "input": {
            "name": doc.name,
            "k": doc.loss.k,
            "digest": loss_document_digest(doc),
        },
        "config": {
            "vertex_cap": config.output_cap,
            "grid_n": config.grid_n,
            "seed": config.seed,
        },
        "report": _report_body(report),
    }
    return json.dumps(body, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# Barycentric plot data (three outputs)


def _order_polygon(points):
    """Order 2-simplex points counterclockwise around their centroid.

    Exact: points are embedded affinely in the plane and compared by
    half-plane and cross product; the lexicographically smallest point
    comes first.
    """
    pts = sorted(points)
    if len(pts) <= 2:
        return pts
    embedded = [(q[1] + HALF * q[2], q[2], q) for q in pts]
    n = len(embedded)
    cx = sum((p[0] for p in embedded), ZERO) / n
    cy = sum((p[1] for p in embedded), ZERO) / n

    def half(p):
        dx, dy = p[0] - cx, p[1] - cy
        return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1

    def compare(a, b):
        ha, hb = half(a), half(b)
        if ha != hb:
            return -1 if ha < hb else 1
        cross = (a[0] - cx) * (b[1] - cy) - (a[1] - cy) * (b[0] - cx)
        if cross > 0:
            return -1
        if cross < 0:
            return 1
        return 0

    ordered = sorted(embedded, key=cmp_to_key(compare))
    start = min(range(n), key=lambda i: ordered[i][2])
    return [ordered[(start + i) % n][2] for i in range(n)]


def geometry_document(doc: LossDocument) -> dict:
    """Prediction-set polygons, midpoint markers and dominant-label
    boundary segments in barycentric coordinates.  Three outputs only."""
    loss = doc.loss
    if loss.k != 3:
        raise StructuralError("plot data is defined for exactly three outputs")
    regions = []
    for y in range(3):
        vertices = prediction_set(loss, y).vertices()
        polygon = _order_polygon(list(vertices))
        regions.append({"y": y + 1, "polygon": [_point(q) for q in polygon]})
    midpoints = [pair_midpoint(3, y, z) for y in range(3) for z in range(y + 1, 3)]
    corners = [basis_point(3, y) for y in range(3)]
    lines = []
    for y in range(3):
        others = [z for z in range(3) if z != y]
        ends = []
        for z in others:
            point = [HALF, HALF, HALF]
            point[[i for i in range(3) if i not in (y, z)][0]] = ZERO
            ends.append(_point(point))
        lines.append({"y": y + 1, "segment": ends})
    return {
        "format": GEOMETRY_FORMAT,
        "name": doc.name,
        "k": 3,
        "regions": regions,
        "markers": {
            "pair_midpoints": [_point(p) for p in midpoints],
            "corners": [_point(p) for p in corners],
        },
        "lines": lines,
    }


def geometry_document_json(doc: LossDocument) -> str:
    return json.dumps(geometry_document(doc), sort_keys=True, indent=2) + "\n"
