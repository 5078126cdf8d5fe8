"""Deciding basicness of point sets, with certificates both ways.

A set ``M`` is basic when every ``f: M -> R`` splits as
``f(x) = f_1(x_1) + ... + f_d(x_d)``.  Writing ``X[i][j] = f_i(j)`` turns this
into the linear system ``A_M X = f`` whose matrix has one row per point and
one column per layer.  ``M`` is basic exactly when the rows of ``A_M`` are
independent; a left-kernel vector is an annihilation function.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import (
    GridShape,
    Layer,
    PointSet,
    WeightFunction,
    is_annihilation,
)
from .exactlin import (
    ExactMatrix,
    left_kernel_primitive,
    pivot_columns,
    rank_exact,
    solve_exact,
)


class NotNonBasicError(ValueError):
    """Raised when an annihilation function is requested for a basic set."""


class KernelDimensionError(ValueError):
    """The annihilation space is not one-dimensional."""

    def __init__(self, dimension: int):
        super().__init__(
            f"annihilation space has dimension {dimension}; "
            "an irreducible annihilation function needs dimension 1"
        )
        self.dimension = dimension


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class CoordinateDecomposition:
    """One table per axis: ``tables[i][j-1]`` is ``f_{i+1}(j)``."""

    shape: GridShape
    tables: tuple

    def __call__(self, p) -> Fraction:
        return sum(t[x - 1] for t, x in zip(self.tables, p))

    def reproduces(self, f: WeightFunction) -> bool:
        return all(self(p) == v for p, v in f.items())


@dataclass(frozen=True)
class BasisVerdict:
    """Outcome of :func:`is_basic`.

    A basic verdict carries ``pivot_layers``: ``|M|`` layers whose columns
    of ``A_M`` form a nonsingular square submatrix, so the system is
    solvable for every right-hand side.  A non-basic verdict carries a
    nonzero primitive annihilation function.
    """

    basic: bool
    rank: int
    annihilation: Optional[WeightFunction] = None
    pivot_layers: tuple = ()

    def verify(self, M: PointSet) -> bool:
        if self.basic:
            if self.annihilation is not None or len(self.pivot_layers) != len(M):
                return False
            if not M.points:
                return True
            cols = [M.shape.layer_index(Layer(*lay)) for lay in self.pivot_layers]
            A = incidence_matrix(M)
            square = ExactMatrix.from_rows(([r[c] for c in cols] for r in A.rows), len(cols))
            return rank_exact(square) == len(M)
        w = self.annihilation
        return (
            w is not None
            and w.base == M
            and any(v != 0 for v in w.values)
            and is_annihilation(w)
        )


def incidence_matrix(M: PointSet) -> ExactMatrix:
    """The 0/1 matrix ``A_M``: rows are points, columns layers (axis-major)."""
    offsets = []
    acc = 0
    for s in M.shape.sides:
        offsets.append(acc)
        acc += s
    rows = []
    for p in M.points:
        row = [0] * acc
        for off, x in zip(offsets, p):
            row[off + x - 1] = 1
        rows.append(tuple(row))
    return ExactMatrix(tuple(rows), acc)


def _as_weight(M: PointSet, vec) -> WeightFunction:
    return WeightFunction(M, tuple(vec))


def annihilation_basis(M: PointSet) -> list:
    """Primitive integer basis of all annihilation functions of ``M``."""
    if not M.points:
        return []
    return [_as_weight(M, v) for v in left_kernel_primitive(incidence_matrix(M))]


def is_basic(M: PointSet) -> BasisVerdict:
    if not M.points:
        return BasisVerdict(True, 0)
    A = incidence_matrix(M)
    rank = rank_exact(A)
    if rank == len(M):
        layers = M.shape.layers()
        pivots = pivot_columns(A)
        return BasisVerdict(True, rank, pivot_layers=tuple(tuple(layers[c]) for c in pivots))
    kernel = left_kernel_primitive(A)
    w = _as_weight(M, kernel[0])
    assert is_annihilation(w), "left kernel vector failed to annihilate"
    return BasisVerdict(False, rank, annihilation=w)


def irreducible_annihilation(M: PointSet) -> WeightFunction:
    """The unique primitive annihilation function (first nonzero value positive)."""
    basis = annihilation_basis(M)
    if not basis:
        raise NotNonBasicError("the set is basic; it has no nonzero annihilation function")
    if len(basis) > 1:
        raise KernelDimensionError(len(basis))
    return basis[0]


def is_minimal_nonbasic(M: PointSet) -> bool:
    """Non-basic, while removing any single point leaves a basic set.

    Single deletions suffice: subsets of basic sets are basic.
    """
    if is_basic(M).basic:
        return False
    return all(is_basic(M.without(p)).basic for p in M.points)


def is_minimal_by_kernel(M: PointSet) -> bool:
    """Cross-check: one-dimensional annihilation space with a nowhere-zero generator."""
    basis = annihilation_basis(M)
    return len(basis) == 1 and all(v != 0 for v in basis[0].values)


def greedy_singleton_filter(M: PointSet) -> PointSet:
    """Strip points that are alone in some layer until none is.

    An empty result proves ``M`` basic; a nonempty one proves nothing.
    """
    pts = set(M.points)
    changed = True
    while changed and pts:
        changed = False
        counts = {}
        for p in pts:
            for i, x in enumerate(p):
                counts[(i, x)] = counts.get((i, x), 0) + 1
        lonely = {p for p in pts if any(counts[(i, x)] == 1 for i, x in enumerate(p))}
        if lonely:
            pts -= lonely
            changed = True
    return M.subset(pts)


def is_basic_2d_fast(M: PointSet) -> bool:
    """Planar test: basic iff the row/column graph of ``M`` has no cycle."""
    if M.d != 2:
        raise PreconditionError(f"the planar test needs d = 2, got d = {M.d}")
    parent = {}

    def find(u):
        while parent.setdefault(u, u) != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    for x, y in M.points:
        a, b = find(("row", x)), find(("col", y))
        if a == b:
            return False
        parent[a] = b
    return True


@dataclass(frozen=True)
class DecompositionResult:
    """Either a decomposition or an annihilation function ``g`` with ``<g, f> != 0``."""

    decomposition: Optional[CoordinateDecomposition] = None
    certificate: Optional[WeightFunction] = None

    @property
    def feasible(self) -> bool:
        return self.decomposition is not None


def solve_additive_decomposition(M: PointSet, f: WeightFunction) -> DecompositionResult:
    """Solve ``f(x) = sum_i f_i(x_i)`` exactly on ``M``.

    Free layer values are pinned to zero, preferring the low-valued layers,
    so ``f_i(1) = 0`` whenever the system leaves it free.
    """
    if f.base != M:
        raise ValueError("the weight function is not defined on this set")
    shape = M.shape
    if not M.points:
        return DecompositionResult(CoordinateDecomposition(shape, tuple((0,) * s for s in shape.sides)))
    A = incidence_matrix(M)
    x = solve_exact(A, f.values)
    if x is None:
        for g in annihilation_basis(M):
            if g.dot(f) != 0:
                return DecompositionResult(certificate=g)
        raise AssertionError("inconsistent system without a separating annihilation function")
    tables = []
    off = 0
    for s in shape.sides:
        tables.append(tuple(x[off: off + s]))
        off += s
    return DecompositionResult(CoordinateDecomposition(shape, tuple(tables)))


@dataclass(frozen=True)
class Coloring:
    """A two-coloring of ``points`` balanced on every layer; ``+1`` red, ``-1`` blue."""

    points: tuple
    colors: tuple

    def as_weight(self, M: PointSet) -> WeightFunction:
        return WeightFunction.from_mapping(M, dict(zip(self.points, self.colors)))

    def is_balanced(self, M: PointSet) -> bool:
        return bool(self.points) and is_annihilation(self.as_weight(M))


def check_two_or_zero(M: PointSet) -> None:
    for layer, c in M.layer_counts().items():
        if c not in (0, 2):
            raise PreconditionError(f"layer {layer} contains {c} points; expected 0 or 2")


def two_coloring_criterion(M: PointSet) -> Optional[Coloring]:
    """Balanced coloring of a nonempty ``K`` in ``M``, or ``None`` when ``M`` is basic.

    Requires every layer to hold exactly zero or two points of ``M``.
    """
    check_two_or_zero(M)
    verdict = is_basic(M)
    if verdict.basic:
        return None
    pts, colors = [], []
    for p, v in verdict.annihilation.items():
        if v:
            pts.append(p)
            colors.append(1 if v > 0 else -1)
    return Coloring(tuple(pts), tuple(colors))
