"""Writing annihilation functions of the full grid as sums of rectangles.

A rectangle term with axes ``(i, j)``, values ``(a_i, b_i)`` and
``(a_j, b_j)`` and the other coordinates fixed contributes ``+coeff`` at the
corners ``(a_i, a_j)`` and ``(b_i, b_j)`` and ``-coeff`` at the two mixed
corners.  With coefficient 1 this is the alternating ``+1 -1 +1 -1`` function
around the rectangle.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .core import GridError, GridShape, PointSet, WeightFunction, violated_layers


class NotAnnihilatingError(ValueError):
    def __init__(self, layers):
        self.layers = list(layers)
        shown = ", ".join(str(lay) for lay in self.layers[:5])
        super().__init__(f"not an annihilation function: nonzero sum on layer(s) {shown}")


@dataclass(frozen=True)
class RectangleTerm:
    axes: tuple
    values: tuple
    fixed: dict = field(default_factory=dict, hash=False)
    coeff: int = 1

    def __post_init__(self):
        i, j = self.axes
        if not 1 <= i < j:
            raise GridError(f"rectangle axes must satisfy 1 <= i < j, got {self.axes}")
        for a, b in self.values:
            if not a < b:
                raise GridError(f"rectangle values must satisfy a < b, got {self.values}")
        if self.coeff == 0:
            raise ValueError("rectangle coefficient must be nonzero")
        fixed = {int(k): int(v) for k, v in self.fixed.items()}
        if i in fixed or j in fixed:
            raise GridError("fixed coordinates overlap the rectangle axes")
        object.__setattr__(self, "fixed", fixed)

    def vertices(self, d: int) -> tuple:
        """Corners ``P, Q, R, S`` in cyclic order; ``P`` and ``R`` carry ``+coeff``."""
        i, j = self.axes
        if j > d or set(self.fixed) != set(range(1, d + 1)) - {i, j}:
            raise GridError(f"rectangle {self} does not specify a point of a {d}-dimensional grid")
        (ai, bi), (aj, bj) = self.values

        def pt(xi, xj):
            p = [0] * d
            for k, v in self.fixed.items():
                p[k - 1] = v
            p[i - 1], p[j - 1] = xi, xj
            return tuple(p)

        return pt(ai, aj), pt(bi, aj), pt(bi, bj), pt(ai, bj)


def simple_function(P, Q, R, S) -> dict:
    """``1_P - 1_Q + 1_R - 1_S`` as a sparse mapping."""
    out = {}
    for p, s in ((P, 1), (Q, -1), (R, 1), (S, -1)):
        out[p] = out.get(p, 0) + s
    return out


def _accumulate(total: dict, terms: dict, scale: int = 1) -> None:
    for p, v in terms.items():
        nv = total.get(p, 0) + scale * v
        if nv:
            total[p] = nv
        else:
            total.pop(p, None)


def eval_rectangles(terms, shape: GridShape) -> WeightFunction:
    """Pointwise sum of the terms, on the union of their vertices."""
    total = {}
    seen = set()
    for t in terms:
        verts = t.vertices(shape.d)
        for v in verts:
            shape.check_point(v)
            seen.add(v)
        _accumulate(total, simple_function(*verts), t.coeff)
    base = PointSet(shape, tuple(seen))
    return WeightFunction.from_mapping(base, total)


def eval_unit_quads(quads, shape: GridShape) -> WeightFunction:
    total = {}
    seen = set()
    for q in quads:
        for v in q:
            shape.check_point(v)
            seen.add(v)
        _accumulate(total, simple_function(*q))
    return WeightFunction.from_mapping(PointSet(shape, tuple(seen)), total)


def expand_unit(terms, d: int) -> list:
    """Each term as ``|coeff|`` unit simple functions.

    A negative coefficient is absorbed by rotating the corners, since
    ``-f_PQRS = f_QRSP``.
    """
    quads = []
    for t in terms:
        P, Q, R, S = t.vertices(d)
        quad = (P, Q, R, S) if t.coeff > 0 else (Q, R, S, P)
        quads.extend([quad] * abs(t.coeff))
    return quads


def _dense(g: WeightFunction) -> dict:
    return {p: v for p, v in g.items() if v}


def decompose_into_rectangles(g: WeightFunction) -> list:
    """Integer rectangle terms summing to ``g`` (zero-extended to the grid).

    Points with at least two coordinates above 1 are cleared one at a time,
    from the most such coordinates down, lexicographically within a level.
    Clearing ``P`` subtracts ``g(P)`` times the rectangle spanned by ``P``
    and the two smallest axes where ``P`` exceeds 1; the other three corners
    have fewer coordinates above 1, so each point is visited once.  What is
    left lives on the axis arms through ``(1, ..., 1)``, where an
    annihilation function must vanish.
    """
    bad = violated_layers(g)
    if bad:
        raise NotAnnihilatingError(bad)
    for v in g.values:
        if not isinstance(v, int):
            raise ValueError("rectangle decompositions need integer values")
    d = g.base.d
    rest = _dense(g)

    def level(p):
        return sum(1 for x in p if x > 1)

    candidates = sorted(
        (p for p in g.base.shape.points() if level(p) >= 2),
        key=lambda p: (-level(p), p),
    )
    terms = []
    for P in candidates:
        c = rest.get(P, 0)
        if not c:
            continue
        i, j = [k + 1 for k, x in enumerate(P) if x > 1][:2]
        fixed = {k + 1: x for k, x in enumerate(P) if k + 1 not in (i, j)}
        term = RectangleTerm((i, j), ((1, P[i - 1]), (1, P[j - 1])), fixed, c)
        _accumulate(rest, simple_function(*term.vertices(d)), -c)
        terms.append(term)
    if rest:
        raise AssertionError(f"residual {rest} left on the axis arms")
    return terms


def verify_decomposition(g: WeightFunction, terms) -> bool:
    shape = g.base.shape
    try:
        total = eval_rectangles(terms, shape)
    except (GridError, ValueError):
        return False
    return _dense(total) == _dense(g)
