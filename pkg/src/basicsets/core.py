"""Grids, layers, point sets and weight functions.

Coordinates are 1-indexed throughout: a grid of side ``n`` has values
``1..n`` on every axis.  Points are plain tuples of ints.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, NamedTuple, Sequence, Union

Number = Union[int, Fraction]
Point = tuple


class GridError(ValueError):
    """A point, layer or shape does not fit the grid."""


@dataclass(frozen=True)
class GridShape:
    """A box ``[n_1] x ... x [n_d]``; the uniform cube has all sides equal."""

    sides: tuple

    def __post_init__(self):
        sides = tuple(int(s) for s in self.sides)
        if not sides:
            raise GridError("a grid needs at least one axis")
        if any(s < 1 for s in sides):
            raise GridError(f"side lengths must be >= 1, got {sides}")
        object.__setattr__(self, "sides", sides)

    @classmethod
    def cube(cls, n: int, d: int) -> "GridShape":
        return cls((n,) * d)

    @property
    def d(self) -> int:
        return len(self.sides)

    @property
    def n(self) -> int:
        """Side length of a uniform grid (the largest side otherwise)."""
        return max(self.sides)

    @property
    def is_uniform(self) -> bool:
        return len(set(self.sides)) == 1

    @property
    def layer_count(self) -> int:
        return sum(self.sides)

    @property
    def size(self) -> int:
        total = 1
        for s in self.sides:
            total *= s
        return total

    def layers(self) -> list["Layer"]:
        """All layers, axis-major then value (the column order of A_M)."""
        return [Layer(i, v) for i, s in enumerate(self.sides, 1) for v in range(1, s + 1)]

    def layer_index(self, layer: "Layer") -> int:
        self.check_layer(layer)
        return sum(self.sides[: layer.axis - 1]) + layer.value - 1

    def points(self) -> Iterator[tuple]:
        """Every grid point in lexicographic order."""
        return product(*(range(1, s + 1) for s in self.sides))

    def contains(self, p: Sequence[int]) -> bool:
        return len(p) == self.d and all(1 <= x <= s for x, s in zip(p, self.sides))

    def check_point(self, p: Sequence[int]) -> tuple:
        p = tuple(p)
        if len(p) != self.d:
            raise GridError(f"point {p} has {len(p)} coordinates, expected {self.d}")
        for i, (x, s) in enumerate(zip(p, self.sides), 1):
            if isinstance(x, bool) or not isinstance(x, int):
                raise GridError(f"point {p}: coordinate {i} is not an integer")
            if not 1 <= x <= s:
                raise GridError(f"point {p}: coordinate {i} outside [1, {s}]")
        return p

    def check_layer(self, layer: "Layer") -> None:
        if not 1 <= layer.axis <= self.d:
            raise GridError(f"layer axis {layer.axis} outside [1, {self.d}]")
        if not 1 <= layer.value <= self.sides[layer.axis - 1]:
            raise GridError(
                f"layer value {layer.value} outside [1, {self.sides[layer.axis - 1]}]"
            )


class Layer(NamedTuple):
    """The hyperplane ``x_axis = value`` (both 1-indexed)."""

    axis: int
    value: int

    def __contains__(self, p) -> bool:
        return p[self.axis - 1] == self.value

    def __str__(self) -> str:
        return f"x{self.axis}={self.value}"


@dataclass(frozen=True)
class PointSet:
    """Distinct grid points kept in lexicographic order.

    The order is what fixes the row order of the incidence matrix, so every
    derived vector (kernels, colorings, certificates) is aligned with
    ``points``.
    """

    shape: GridShape
    points: tuple = ()
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        pts = [self.shape.check_point(p) for p in self.points]
        ordered = tuple(sorted(set(pts)))
        if len(ordered) != len(pts):
            seen, dups = set(), []
            for p in pts:
                if p in seen:
                    dups.append(p)
                seen.add(p)
            raise GridError(f"duplicate points: {dups}")
        object.__setattr__(self, "points", ordered)
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(ordered)})

    @classmethod
    def of(cls, points: Iterable[Sequence[int]], n: int, d: int | None = None) -> "PointSet":
        """Build a set in the cube ``[n]^d``; ``d`` defaults to the point length."""
        pts = [tuple(p) for p in points]
        if d is None:
            if not pts:
                raise GridError("cannot infer d from an empty point list")
            d = len(pts[0])
        return cls(GridShape.cube(n, d), tuple(pts))

    @classmethod
    def full(cls, shape: GridShape) -> "PointSet":
        return cls(shape, tuple(shape.points()))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, p) -> bool:
        return tuple(p) in self._index

    def index(self, p) -> int:
        try:
            return self._index[tuple(p)]
        except KeyError:
            raise KeyError(f"{tuple(p)} is not in the set") from None

    @property
    def d(self) -> int:
        return self.shape.d

    def without(self, p) -> "PointSet":
        p = tuple(p)
        return PointSet(self.shape, tuple(q for q in self.points if q != p))

    def subset(self, points: Iterable) -> "PointSet":
        return PointSet(self.shape, tuple(points))

    def layer_counts(self) -> dict:
        counts = {layer: 0 for layer in self.shape.layers()}
        for p in self.points:
            for i, x in enumerate(p, 1):
                counts[Layer(i, x)] += 1
        return counts


def layer_members(M: PointSet, layer: Layer) -> list:
    """Points of ``M`` lying in ``layer``, in canonical order."""
    M.shape.check_layer(layer)
    return [p for p in M.points if p[layer.axis - 1] == layer.value]


def covers_all_layers(M: PointSet) -> bool:
    return all(c > 0 for c in M.layer_counts().values())


def _parse_number(v) -> Number:
    if isinstance(v, Fraction):
        return v if v.denominator != 1 else int(v.numerator)
    if isinstance(v, bool):
        raise TypeError("booleans are not weights")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        q = Fraction(v)
        return int(q) if q.denominator == 1 else q
    raise TypeError(f"weights must be exact integers or rationals, got {type(v).__name__}")


@dataclass(frozen=True)
class WeightFunction:
    """Exact values attached to the points of a set, aligned with its order."""

    base: PointSet
    values: tuple

    def __post_init__(self):
        vals = tuple(_parse_number(v) for v in self.values)
        if len(vals) != len(self.base):
            raise ValueError(
                f"{len(vals)} values given for a set of {len(self.base)} points"
            )
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_mapping(cls, base: PointSet, mapping: dict) -> "WeightFunction":
        """Values from ``{point: value}``; points of ``base`` not mentioned get 0."""
        extra = [p for p in mapping if tuple(p) not in base]
        if extra:
            raise KeyError(f"points outside the base set: {extra}")
        return cls(base, tuple(mapping.get(p, 0) for p in base.points))

    @classmethod
    def indicator(cls, base: PointSet, p) -> "WeightFunction":
        return cls.from_mapping(base, {tuple(p): 1})

    @classmethod
    def zero(cls, base: PointSet) -> "WeightFunction":
        return cls(base, (0,) * len(base))

    @property
    def is_rational(self) -> bool:
        """Numeric-mode tag: True when some value is a non-integer rational."""
        return any(isinstance(v, Fraction) for v in self.values)

    def __getitem__(self, p) -> Number:
        return self.values[self.base.index(p)]

    def items(self):
        return zip(self.base.points, self.values)

    def as_dict(self) -> dict:
        return dict(self.items())

    def support(self) -> PointSet:
        return self.base.subset(p for p, v in self.items() if v != 0)

    def __add__(self, other: "WeightFunction") -> "WeightFunction":
        if other.base != self.base:
            raise ValueError("weight functions live on different sets")
        return WeightFunction(self.base, tuple(a + b for a, b in zip(self.values, other.values)))

    def __neg__(self) -> "WeightFunction":
        return self.scale(-1)

    def scale(self, c: Number) -> "WeightFunction":
        return WeightFunction(self.base, tuple(c * v for v in self.values))

    def dot(self, other: "WeightFunction") -> Number:
        if other.base != self.base:
            raise ValueError("weight functions live on different sets")
        return sum(a * b for a, b in zip(self.values, other.values))

    def restrict(self, base: PointSet) -> "WeightFunction":
        """Values on a subset; every dropped point must carry zero."""
        lost = [p for p, v in self.items() if v != 0 and p not in base]
        if lost:
            raise ValueError(f"restriction drops nonzero values at {lost}")
        return WeightFunction(base, tuple(self[p] if p in self.base else 0 for p in base.points))

    def extend(self, base: PointSet) -> "WeightFunction":
        """Zero extension to a superset."""
        missing = [p for p in self.base.points if p not in base]
        if missing:
            raise ValueError(f"{missing} not in the target set")
        mapping = self.as_dict()
        return WeightFunction(base, tuple(mapping.get(p, 0) for p in base.points))


def layer_sums(w: WeightFunction) -> dict:
    """Sum of ``w`` over every layer of the grid (empty layers sum to 0)."""
    sums = {layer: 0 for layer in w.base.shape.layers()}
    for p, v in w.items():
        for i, x in enumerate(p, 1):
            sums[Layer(i, x)] += v
    return sums


def violated_layers(w: WeightFunction) -> list:
    return [layer for layer, s in layer_sums(w).items() if s != 0]


def is_annihilation(w: WeightFunction) -> bool:
    return not violated_layers(w)


def format_point(p) -> str:
    return "(" + ",".join(str(x) for x in p) + ")"


def format_weight_function(w: WeightFunction) -> str:
    """Render as a signed sum of indicators, e.g. ``2*1_(1,1,1) - 1_(2,1,1)``."""
    terms = []
    for p, v in w.items():
        if v == 0:
            continue
        mag = abs(v)
        coef = "" if mag == 1 else f"{mag}*"
        sign = "-" if v < 0 else "+"
        terms.append((sign, f"{coef}1_{format_point(p)}"))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, t in terms[1:]:
        out += f" {sign} {t}"
    return out
