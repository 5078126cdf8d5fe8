"""Exact integer linear algebra: rank, left kernels and consistent solves.

Nothing here touches floating point.  Rank uses Bareiss elimination; the
kernel and solve routines use Gauss-Jordan elimination on integer rows, with
each row divided by its content after every update so entries stay small.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence


@dataclass(frozen=True)
class ExactMatrix:
    """A dense integer matrix stored as a tuple of row tuples."""

    rows: tuple
    ncols: int

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], ncols: int | None = None) -> "ExactMatrix":
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(rows[0])
        for i, r in enumerate(rows):
            if len(r) != ncols:
                raise ValueError(f"row {i} has length {len(r)}, expected {ncols}")
        return cls(rows, ncols)

    @classmethod
    def identity(cls, k: int) -> "ExactMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(k)) for i in range(k)), k)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "ExactMatrix":
        return cls(tuple((0,) * ncols for _ in range(nrows)), ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple:
        return (self.nrows, self.ncols)

    def transpose(self) -> "ExactMatrix":
        if not self.rows:
            return ExactMatrix(((),) * self.ncols, 0)
        return ExactMatrix(tuple(zip(*self.rows)), self.nrows)

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def matvec(self, x: Sequence) -> list:
        if len(x) != self.ncols:
            raise ValueError(f"vector of length {len(x)} for {self.ncols} columns")
        return [sum(a * b for a, b in zip(r, x)) for r in self.rows]

    def vecmat(self, y: Sequence) -> list:
        """``y^T A`` as a list of length ``ncols``."""
        if len(y) != self.nrows:
            raise ValueError(f"vector of length {len(y)} for {self.nrows} rows")
        out = [0] * self.ncols
        for c, r in zip(y, self.rows):
            if c:
                for j, a in enumerate(r):
                    if a:
                        out[j] += c * a
        return out


@dataclass(frozen=True)
class KernelBasis:
    """Primitive, sign-normalized integer vectors spanning ``{v : v^T A = 0}``."""

    vectors: tuple
    nrows: int

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def __getitem__(self, i):
        return self.vectors[i]


def _content(row) -> int:
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return 1
    return g


def primitive(vec: Sequence) -> tuple:
    """Scale a rational vector to coprime integers with first nonzero entry > 0."""
    den = 1
    for x in vec:
        if isinstance(x, Fraction):
            den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in vec]
    g = _content(ints)
    if g == 0:
        return tuple(ints)
    lead = next(x for x in ints if x)
    if lead < 0:
        g = -g
    return tuple(x // g for x in ints)


def rank_exact(A: ExactMatrix) -> int:
    """Rank over Q by Bareiss fraction-free elimination."""
    m = [list(r) for r in A.rows]
    nrows, ncols = A.nrows, A.ncols
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        pr = m[r]
        p = pr[c]
        for i in range(r + 1, nrows):
            row = m[i]
            a = row[c]
            if a:
                m[i] = [(p * x - a * y) // prev for x, y in zip(row, pr)]
            elif p != prev:
                m[i] = [(p * x) // prev for x in row]
        prev = p
        r += 1
    return r


def _gauss_jordan(m: list, col_order: Sequence[int], stop_col: int | None = None) -> list:
    """Reduce integer rows in place; return ``[(row, col), ...]`` pivots.

    Pivot columns are taken in ``col_order``; within a column the topmost
    available row is the pivot.  Only columns ``< stop_col`` are eligible
    (used to keep an augmented right-hand side out of the pivot search).
    After the call every pivot column is zero outside its pivot row.
    """
    nrows = len(m)
    pivots = []
    used = [False] * nrows
    for c in col_order:
        if stop_col is not None and c >= stop_col:
            continue
        piv = next((i for i in range(nrows) if not used[i] and m[i][c]), None)
        if piv is None:
            continue
        used[piv] = True
        pr = m[piv]
        p = pr[c]
        for i in range(nrows):
            if i == piv:
                continue
            row = m[i]
            a = row[c]
            if not a:
                continue
            g = gcd(p, a)
            new = [(p // g) * x - (a // g) * y for x, y in zip(row, pr)]
            k = _content(new)
            if k > 1:
                new = [x // k for x in new]
            m[i] = new
        pivots.append((piv, c))
    return pivots


def pivot_columns(A: ExactMatrix) -> list:
    """Columns picked as pivots scanning left to right; ``len`` is the rank."""
    m = [list(r) for r in A.rows]
    return [c for _, c in _gauss_jordan(m, range(A.ncols))]


def nullspace(A: ExactMatrix) -> KernelBasis:
    """Primitive basis of the right kernel ``{x : A x = 0}``."""
    m = [list(r) for r in A.rows]
    pivots = _gauss_jordan(m, range(A.ncols))
    pivot_cols = {c for _, c in pivots}
    vectors = []
    for f in range(A.ncols):
        if f in pivot_cols:
            continue
        x = [Fraction(0)] * A.ncols
        x[f] = Fraction(1)
        for r, c in pivots:
            if m[r][f]:
                x[c] = Fraction(-m[r][f], m[r][c])
        vectors.append(primitive(x))
    return KernelBasis(tuple(vectors), A.ncols)


def left_kernel_primitive(A: ExactMatrix) -> KernelBasis:
    """Primitive basis of ``{v : v^T A = 0}``; empty iff the rows are independent."""
    basis = nullspace(A.transpose())
    return KernelBasis(basis.vectors, A.nrows)


def solve_exact(A: ExactMatrix, b: Sequence, rightmost_first: bool = True) -> Optional[list]:
    """A rational ``x`` with ``A x = b``, or ``None`` when inconsistent.

    Free variables are set to zero.  Pivot columns are chosen from the
    right by default, so in an underdetermined system the leftmost columns
    are the ones left free.
    """
    if len(b) != A.nrows:
        raise ValueError(f"right-hand side has length {len(b)}, matrix has {A.nrows} rows")
    den = 1
    for v in b:
        if isinstance(v, Fraction):
            den = den * v.denominator // gcd(den, v.denominator)
    m = [list(r) + [int(v * den)] for r, v in zip(A.rows, b)]
    cols = range(A.ncols - 1, -1, -1) if rightmost_first else range(A.ncols)
    pivots = _gauss_jordan(m, cols, stop_col=A.ncols)
    pivot_rows = {r for r, _ in pivots}
    for i, row in enumerate(m):
        if i not in pivot_rows and row[-1]:
            return None
    x = [Fraction(0)] * A.ncols
    for r, c in pivots:
        x[c] = Fraction(m[r][-1], m[r][c] * den)
    return [int(v) if v.denominator == 1 else v for v in x]
