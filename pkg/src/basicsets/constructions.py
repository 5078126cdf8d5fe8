"""Generators for the extremal families, each with its known annihilation function."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .core import GridError, GridShape, PointSet, WeightFunction, is_annihilation


@dataclass(frozen=True)
class NamedFamily:
    tag: str
    params: dict
    points: PointSet
    claimed_annihilation: Optional[WeightFunction] = None

    def __post_init__(self):
        w = self.claimed_annihilation
        if w is not None and not is_annihilation(w):
            raise AssertionError(f"{self.tag}: claimed annihilation function fails a layer")


def _arm_point(d: int, axis: int, k: int) -> tuple:
    p = [1] * d
    p[axis] = k
    return tuple(p)


def cross_set(n: int, d: int) -> NamedFamily:
    """The ``d`` axis arms through ``(1, ..., 1)``: a basic set of size ``dn - (d-1)``."""
    if n < 1 or d < 1:
        raise GridError("cross_set needs n >= 1 and d >= 1")
    pts = {_arm_point(d, i, k) for i in range(d) for k in range(1, n + 1)}
    return NamedFamily("cross", {"n": n, "d": d}, PointSet(GridShape.cube(n, d), tuple(pts)))


def staircase_set(n: int, d: int) -> NamedFamily:
    """``2n`` points ``(k,...,k), (k+1,k,...,k)`` closed up by ``(n,...,n), (1,n,...,n)``."""
    if n < 2 or d < 2:
        raise GridError("staircase_set needs n >= 2 and d >= 2")
    values = {}
    for k in range(1, n):
        values[(k,) * d] = 1
        values[(k + 1,) + (k,) * (d - 1)] = -1
    values[(n,) * d] = 1
    values[(1,) + (n,) * (d - 1)] = -1
    M = PointSet(GridShape.cube(n, d), tuple(values))
    return NamedFamily("staircase", {"n": n, "d": d}, M, WeightFunction.from_mapping(M, values))


def cross_plus_point(n: int, d: int, X) -> NamedFamily:
    """The cross with one extra point ``X`` having every coordinate above 1.

    The claimed function is ``(d-1) 1_(1..1) + 1_X - sum_i 1_(X_i on arm i)``.
    """
    X = tuple(X)
    if len(X) != d:
        raise GridError(f"X has {len(X)} coordinates, expected {d}")
    if any(x <= 1 for x in X):
        raise GridError(f"every coordinate of X must exceed 1, got {X}")
    if any(x > n for x in X):
        raise GridError(f"X = {X} lies outside [{n}]^{d}")
    base = cross_set(n, d).points
    M = PointSet(base.shape, base.points + (X,))
    values = {(1,) * d: d - 1, X: 1}
    for i, x in enumerate(X):
        values[_arm_point(d, i, x)] = -1
    return NamedFamily(
        "cross_plus_point", {"n": n, "d": d, "X": list(X)}, M,
        WeightFunction.from_mapping(M, values),
    )


def unbounded_family(m: int) -> NamedFamily:
    """``6m + 2`` points in ``[3m+2]^3`` whose irreducible annihilation reaches ``m``.

    The free labels are packed into consecutive blocks: ``a_k = k``,
    ``b_k = m + k``, ``c_k = 2m + k``, then ``3m + 1`` and ``3m + 2`` for the
    two special values.  Indices wrap, ``a_{m+1} = a_1`` and so on.
    """
    if m < 1:
        raise GridError("unbounded_family needs m >= 1")
    a = [k for k in range(1, m + 1)]
    b = [m + k for k in range(1, m + 1)]
    c = [2 * m + k for k in range(1, m + 1)]
    dd, ee = 3 * m + 1, 3 * m + 2
    values = {}
    for k in range(m):
        nxt = (k + 1) % m
        values[(dd, a[k], a[k])] = 1
        values[(b[k], dd, b[k])] = 1
        values[(c[k], c[k], dd)] = 1
        values[(ee, a[k], a[nxt])] = -1
        values[(b[k], ee, b[nxt])] = -1
        values[(c[k], c[nxt], ee)] = -1
    values[(dd, dd, dd)] = -m
    values[(ee, ee, ee)] = m
    M = PointSet(GridShape.cube(ee, 3), tuple(values))
    return NamedFamily("unbounded", {"m": m}, M, WeightFunction.from_mapping(M, values))
