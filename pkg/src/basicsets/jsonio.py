"""JSON encodings for point sets, weight functions, rectangles, graphs and reports.

Exact rationals are written as ``"p/q"`` strings; integers stay integers.
Vertices of graphs are 1-indexed on the wire.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .basis import BasisVerdict, Coloring, CoordinateDecomposition
from .constructions import NamedFamily
from .core import GridError, GridShape, PointSet, WeightFunction
from .graphs import Hypergraph, MultiGraph
from .rectangles import RectangleTerm


class InputError(ValueError):
    """Malformed input; the message names the offending field."""


def number_to_json(v):
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else int(v)
    return v


def number_from_json(v, where: str):
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise InputError(f"{where}: expected an integer or a 'p/q' string, got {v!r}")
    if isinstance(v, str):
        try:
            q = Fraction(v)
        except (ValueError, ZeroDivisionError):
            raise InputError(f"{where}: cannot parse {v!r} as an exact rational") from None
        return int(q) if q.denominator == 1 else q
    return v


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None


def _flat(x) -> bool:
    return isinstance(x, list) and all(not isinstance(v, (list, dict)) for v in x)


def dumps(obj, indent: int = 0) -> str:
    """Indented JSON, but points and other flat lists stay on one line."""
    pad = " " * (indent + 2)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {dumps(v, indent + 2)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + " " * indent + "}"
    if isinstance(obj, list) and not _flat(obj) and not all(_flat(v) for v in obj):
        items = [pad + dumps(v, indent + 2) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + " " * indent + "]"
    if isinstance(obj, list) and not _flat(obj):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    return json.dumps(obj, separators=(", ", ": "), ensure_ascii=False)


def _require(obj, key, where="input"):
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected a JSON object")
    if key not in obj:
        raise InputError(f"{where}: missing field {key!r}")
    return obj[key]


def _int_field(obj, key, minimum=None):
    v = _require(obj, key)
    if isinstance(v, bool) or not isinstance(v, int):
        raise InputError(f"field {key!r}: expected an integer, got {v!r}")
    if minimum is not None and v < minimum:
        raise InputError(f"field {key!r}: must be >= {minimum}, got {v}")
    return v


def _shape_from(obj) -> GridShape:
    if "sides" in obj:
        sides = obj["sides"]
        if not isinstance(sides, list) or not all(isinstance(s, int) and not isinstance(s, bool) for s in sides):
            raise InputError("field 'sides': expected a list of integers")
        try:
            shape = GridShape(tuple(sides))
        except GridError as e:
            raise InputError(f"field 'sides': {e}") from None
        if "d" in obj and obj["d"] != shape.d:
            raise InputError(f"field 'd': {obj['d']} disagrees with {len(sides)} sides")
        return shape
    d = _int_field(obj, "d", 1)
    n = _int_field(obj, "n", 1)
    return GridShape.cube(n, d)


def _raw_points(obj, shape: GridShape) -> list:
    pts = _require(obj, "points")
    if not isinstance(pts, list):
        raise InputError("field 'points': expected a list")
    out = []
    for k, p in enumerate(pts):
        where = f"points[{k}]"
        if not isinstance(p, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in p):
            raise InputError(f"{where}: expected a list of integers, got {p!r}")
        if len(p) != shape.d:
            raise InputError(f"{where}: has {len(p)} coordinates, expected d = {shape.d}")
        if any(x == 0 for x in p):
            raise InputError(f"{where}: coordinate 0 found; coordinates are 1-indexed")
        if not shape.contains(p):
            raise InputError(f"{where}: {p} lies outside the grid {list(shape.sides)}")
        out.append(tuple(p))
    return out


def pointset_from_json(obj) -> PointSet:
    shape = _shape_from(obj)
    pts = _raw_points(obj, shape)
    try:
        return PointSet(shape, tuple(pts))
    except GridError as e:
        raise InputError(f"field 'points': {e}") from None


def _shape_json(shape: GridShape) -> dict:
    if shape.is_uniform:
        return {"d": shape.d, "n": shape.n}
    return {"d": shape.d, "sides": list(shape.sides)}


def pointset_to_json(M: PointSet) -> dict:
    out = _shape_json(M.shape)
    out["points"] = [list(p) for p in M.points]
    return out


def weight_from_json(obj) -> WeightFunction:
    """Values are aligned with the points as listed in the input."""
    M = pointset_from_json(obj)
    pts = _raw_points(obj, M.shape)
    vals = _require(obj, "values")
    if not isinstance(vals, list) or len(vals) != len(pts):
        raise InputError(f"field 'values': expected a list of {len(pts)} numbers aligned with 'points'")
    mapping = {p: number_from_json(v, f"values[{k}]") for k, (p, v) in enumerate(zip(pts, vals))}
    return WeightFunction.from_mapping(M, mapping)


def weight_to_json(w: WeightFunction) -> dict:
    out = pointset_to_json(w.base)
    out["values"] = [number_to_json(v) for v in w.values]
    return out


def verdict_to_json(M: PointSet, v: BasisVerdict) -> dict:
    out = {"basic": v.basic, "size": len(M), "rank": v.rank}
    if v.basic:
        out["pivot_layers"] = [list(lay) for lay in v.pivot_layers]
    else:
        out["annihilation"] = weight_to_json(v.annihilation)
    return out


def decomposition_to_json(dec: CoordinateDecomposition) -> dict:
    return {"tables": [[number_to_json(x) for x in t] for t in dec.tables]}


def coloring_to_json(c: Coloring) -> dict:
    return {
        "points": [list(p) for p in c.points],
        "colors": ["red" if x > 0 else "blue" for x in c.colors],
    }


def rectangle_to_json(t: RectangleTerm) -> dict:
    return {
        "axes": list(t.axes),
        "values": [list(v) for v in t.values],
        "fixed": {str(k): v for k, v in sorted(t.fixed.items())},
        "coeff": t.coeff,
    }


def rectangle_from_json(obj, where="term") -> RectangleTerm:
    try:
        axes = tuple(_require(obj, "axes", where))
        values = tuple(tuple(v) for v in _require(obj, "values", where))
        fixed = {int(k): int(v) for k, v in obj.get("fixed", {}).items()}
        coeff = obj.get("coeff", 1)
        return RectangleTerm(axes, values, fixed, coeff)
    except (TypeError, ValueError, AttributeError) as e:
        raise InputError(f"{where}: {e}") from None


def _vertex_count(obj) -> int:
    return _int_field(obj, "vertices", 0)


def _edge_list(obj, nv: int, where="edges") -> list:
    edges = _require(obj, "edges")
    if not isinstance(edges, list):
        raise InputError("field 'edges': expected a list")
    out = []
    for k, e in enumerate(edges):
        if not isinstance(e, list) or not e or not all(isinstance(v, int) and not isinstance(v, bool) for v in e):
            raise InputError(f"edges[{k}]: expected a nonempty list of vertex numbers")
        for v in e:
            if not 1 <= v <= nv:
                raise InputError(f"edges[{k}]: vertex {v} outside [1, {nv}] (vertices are 1-indexed)")
        out.append(tuple(v - 1 for v in e))
    return out


def graph_from_json(obj, allow_loops: bool = False) -> MultiGraph:
    nv = _vertex_count(obj)
    edges = _edge_list(obj, nv)
    for k, e in enumerate(edges):
        if len(e) != 2:
            raise InputError(f"edges[{k}]: a graph edge needs exactly two endpoints")
        if e[0] == e[1] and not allow_loops:
            raise InputError(f"edges[{k}]: self-loop at vertex {e[0] + 1}")
    return MultiGraph(nv, tuple(edges), allow_loops=allow_loops)


def hypergraph_from_json(obj) -> Hypergraph:
    nv = _vertex_count(obj)
    return Hypergraph(nv, tuple(_edge_list(obj, nv)))


def graph_to_json(G) -> dict:
    return {"vertices": G.nvertices, "edges": [[v + 1 for v in e] for e in G.edges]}


def vertex_weights_from_json(obj, nv: int) -> list:
    ws = _require(obj, "weights")
    if not isinstance(ws, list) or len(ws) != nv:
        raise InputError(f"field 'weights': expected {nv} vertex weights")
    return [number_from_json(v, f"weights[{k}]") for k, v in enumerate(ws)]


def family_to_json(F: NamedFamily) -> dict:
    out = {"family": F.tag, "params": F.params}
    out.update(pointset_to_json(F.points))
    out["size"] = len(F.points)
    if F.claimed_annihilation is not None:
        out["values"] = [number_to_json(v) for v in F.claimed_annihilation.values]
    return out


def witness_to_json(w) -> dict:
    out = pointset_to_json(w.points)
    out["values"] = list(w.annihilation.values)
    return out


def report_to_json(report, include_classes: bool = True) -> dict:
    sizes = {}
    for k, r in sorted(report.sizes.items()):
        entry = {"realized": r.realized}
        if r.raw_count is not None:
            entry["raw_count"] = r.raw_count
        entry["class_count"] = len(r.classes)
        if r.evaluations is not None:
            entry["evaluations"] = r.evaluations
        entry["witness"] = witness_to_json(r.witness) if r.witness else None
        if include_classes:
            entry["classes"] = [witness_to_json(w) for w in r.classes]
        sizes[str(k)] = entry
    out = {
        "n": report.n,
        "d": report.d,
        "mode": report.mode,
        "layer_covering": report.layer_covering,
        "seed": report.seed,
        "budget": report.budget,
        "sizes": sizes,
        "realized_sizes": report.realized_sizes,
    }
    if report.conjecture_holds or report.conjecture_fails:
        out["conjecture"] = {
            "holds": report.conjecture_holds,
            "fails": report.conjecture_fails,
        }
    out["findings"] = report.findings
    return out
