"""Searching small grids for minimal non-basic sets.

Minimal non-basic sets are exactly the circuits of the row matroid of the
full-grid incidence matrix: dependent sets all of whose proper subsets are
independent.  Both search modes exploit that.  The exhaustive mode walks
independent sets in lexicographic order and closes them with one more
point; the random mode grows random independent sets and tests which extra
points close them into a circuit of the requested size.
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from math import comb, factorial, gcd
from typing import Optional

import numpy as np

from .basis import is_minimal_nonbasic, irreducible_annihilation, PreconditionError
from .core import GridShape, PointSet, WeightFunction, covers_all_layers, is_annihilation
from .exactlin import primitive

log = logging.getLogger(__name__)

EXHAUSTIVE_POINT_LIMIT = 27
EXHAUSTIVE_SUBSET_LIMIT = 50_000_000
CANONICAL_GROUP_LIMIT = 2_000_000


class SearchRefused(RuntimeError):
    """An exhaustive request exceeds the desk-scale limits."""

    def __init__(self, n, d, k, estimate):
        self.estimate = estimate
        super().__init__(
            f"exhaustive search of size-{k} subsets of [{n}]^{d} would examine up to "
            f"{estimate:,} subsets (limit {EXHAUSTIVE_SUBSET_LIMIT:,}); "
            "use random search or force it"
        )


# ---------------------------------------------------------------------------
# symmetry


def _axis_permutations(shape: GridShape) -> list:
    d = shape.d
    return [s for s in permutations(range(d))
            if all(shape.sides[i] == shape.sides[s[i]] for i in range(d))]


def symmetry_group_size(M: PointSet) -> int:
    """Number of group elements the canonical form scans for ``M``."""
    used = [len({p[i] for p in M.points}) for i in range(M.d)]
    total = 0
    for sigma in _axis_permutations(M.shape):
        size = 1
        for i in range(M.d):
            size *= factorial(used[sigma[i]])
        total += size
    return total


@lru_cache(maxsize=None)
def _permutation_table(u: int) -> np.ndarray:
    return np.array(list(permutations(range(1, u + 1))), dtype=np.int64)


def _image_codes(M: PointSet, full: bool) -> np.ndarray:
    """Sorted point codes of every scanned image of ``M``, one row per group element.

    A point's code is its coordinates read as digits in base ``n + 1``, so
    sorted codes order points lexicographically.  With ``full`` the whole
    group acts; otherwise used values are only sent onto ``1..u``.
    """
    d = M.d
    P = np.array(M.points, dtype=np.int64)
    base = M.shape.n + 1
    if full:
        used = [list(range(1, s + 1)) for s in M.shape.sides]
    else:
        used = [sorted({p[i] for p in M.points}) for i in range(d)]
    blocks = []
    for sigma in _axis_permutations(M.shape):
        codes = None
        for i in range(d):
            vals = used[sigma[i]]
            pos = np.searchsorted(vals, P[:, sigma[i]])
            t = _permutation_table(len(vals))[:, pos] * base ** (d - 1 - i)
            codes = t if codes is None else (codes[:, None, :] + t[None, :, :]).reshape(-1, len(M))
        blocks.append(codes)
    codes = np.concatenate(blocks)
    codes.sort(axis=1)
    return codes


def _decode(M: PointSet, codes) -> PointSet:
    base = M.shape.n + 1
    pts = []
    for code in codes:
        p = []
        for _ in range(M.d):
            p.append(int(code) % base)
            code = int(code) // base
        pts.append(tuple(reversed(p)))
    return PointSet(M.shape, tuple(pts))


def point_codes(M: PointSet) -> tuple:
    base = M.shape.n + 1
    out = []
    for p in M.points:
        c = 0
        for x in p:
            c = c * base + x
        out.append(c)
    return tuple(out)


def _check_group(size: int) -> None:
    if size > CANONICAL_GROUP_LIMIT:
        raise ValueError(f"symmetry group too large to scan ({size:,} elements)")


def canonical_form(M: PointSet) -> PointSet:
    """Lexicographically least image of ``M`` under axis and value permutations.

    Axis permutations only mix axes of equal length.  Because a per-axis
    order-preserving relabelling never increases a sorted point list, the
    minimum is reached by maps sending the values ``M`` uses onto an initial
    segment ``1..u``; only those are scanned.
    """
    if len(M) <= 1:
        return M if not M.points else PointSet(M.shape, ((1,) * M.d,))
    _check_group(symmetry_group_size(M))
    return _decode(M, _lexmin_row(_image_codes(M, full=False)))


def orbit_codes(M: PointSet) -> tuple:
    """``(canonical codes, set of code tuples of every image of M)``."""
    full = 1
    for s in M.shape.sides:
        full *= factorial(s)
    _check_group(full * len(_axis_permutations(M.shape)))
    if not M.points:
        return (), {()}
    codes = _image_codes(M, full=True)
    return _lexmin_row(codes), set(map(tuple, np.unique(codes, axis=0).tolist()))


def _lexmin_row(codes: np.ndarray) -> tuple:
    rows = codes
    for j in range(codes.shape[1]):
        col = rows[:, j]
        rows = rows[col == col.min()]
        if len(rows) == 1:
            break
    return tuple(int(x) for x in rows[0])


def apply_symmetry(M: PointSet, sigma, value_maps) -> PointSet:
    """Image under new ``x_i = value_maps[i][old x_{sigma[i]}]`` (maps 1-indexed dicts)."""
    return PointSet(M.shape, tuple(
        tuple(value_maps[i][p[sigma[i]]] for i in range(M.d)) for p in M.points
    ))


# ---------------------------------------------------------------------------
# incremental circuit detection


def _content(v) -> int:
    g = 0
    for x in v:
        if x:
            g = gcd(g, x)
            if g == 1:
                return 1
    return g


class _Echelon:
    """Rows of ``A_M`` added one at a time, tracking how each reduced row was built.

    ``reduce`` returns the residual of a new row together with integer
    coefficients over the stored rows and the new one.  A zero residual means
    the new row is dependent and the coefficients are a kernel vector.
    """

    def __init__(self, capacity: int):
        self.capacity = capacity
        self.rows = []

    def reduce(self, vec, pos):
        x = list(vec)
        c = [0] * self.capacity
        c[pos] = 1
        for pc, v, cb in self.rows:
            a = x[pc]
            if a:
                p = v[pc]
                g = gcd(p, a)
                p //= g
                a //= g
                x = [p * xi - a * vi for xi, vi in zip(x, v)]
                c = [p * ci - a * bi for ci, bi in zip(c, cb)]
                h = gcd(_content(x), _content(c))
                if h > 1:
                    x = [xi // h for xi in x]
                    c = [ci // h for ci in c]
        return x, c

    def push(self, x, c):
        pc = next(i for i, v in enumerate(x) if v)
        self.rows.append((pc, x, c))

    def pop(self):
        self.rows.pop()


class _Grid:
    def __init__(self, n: int, d: int):
        self.n, self.d = n, d
        self.shape = GridShape.cube(n, d)
        self.points = list(self.shape.points())
        self.L = n * d
        self.cols = [tuple(i * n + x - 1 for i, x in enumerate(p)) for p in self.points]
        self.rows = []
        for cs in self.cols:
            r = [0] * self.L
            for c in cs:
                r[c] = 1
            self.rows.append(r)
        N = len(self.points)
        # avail[col][q]: points of layer col with index >= q
        self.avail = []
        for col in range(self.L):
            suffix = [0] * (N + 1)
            for q in range(N - 1, -1, -1):
                suffix[q] = suffix[q + 1] + (col in self.cols[q])
            self.avail.append(suffix)


def _circuits_from(grid: _Grid, k: int, covering: bool, first: int) -> list:
    """All size-``k`` circuits whose smallest point index is ``first``.

    Returns ``[(indices, coefficients)]``.  Every layer met by a circuit
    holds at least two of its points (a lone point would get coefficient 0),
    and with ``covering`` every layer is met; both prune the walk.
    """
    n, L, N = grid.n, grid.L, len(grid.points)
    counts = [0] * L
    chosen = []
    ech = _Echelon(k)
    out = []

    def needs(qmin, slots):
        axis_need = [0] * grid.d
        for col in range(L):
            c = counts[col]
            if c == 1:
                need = 1
            elif c == 0 and covering:
                need = 2
            else:
                continue
            if grid.avail[col][qmin] < need:
                return None
            axis_need[col // n] += need
        if any(a > slots for a in axis_need):
            return None
        return axis_need

    def add(q, x, c):
        ech.push(x, c)
        chosen.append(q)
        for col in grid.cols[q]:
            counts[col] += 1

    def remove(q):
        ech.pop()
        chosen.pop()
        for col in grid.cols[q]:
            counts[col] -= 1

    def close(qmin):
        t = len(chosen)
        for q in range(qmin, N):
            cs = grid.cols[q]
            ok = True
            for col in range(L):
                c = counts[col] + (col in cs)
                if c == 1 or (covering and c == 0):
                    ok = False
                    break
            if not ok:
                continue
            x, c = ech.reduce(grid.rows[q], t)
            if not any(x) and all(c):
                out.append((tuple(chosen) + (q,), primitive(c)))

    def walk(qmin):
        t = len(chosen)
        if t == k - 1:
            close(qmin)
            return
        for q in range(qmin, N):
            x, c = ech.reduce(grid.rows[q], t)
            if not any(x):
                continue
            add(q, x, c)
            if needs(q + 1, k - t - 1) is not None:
                walk(q + 1)
            remove(q)

    if k < 2:
        return out
    x, c = ech.reduce(grid.rows[first], 0)
    add(first, x, c)
    if needs(first + 1, k - 1) is not None:
        walk(first + 1)
    return out


def _circuits_task(args):
    n, d, k, covering, first = args
    return _circuits_from(_Grid(n, d), k, covering, first)


# ---------------------------------------------------------------------------
# reports


@dataclass
class Witness:
    points: PointSet
    annihilation: WeightFunction

    def verify(self, covering: bool = True) -> bool:
        M = self.points
        f = self.annihilation
        return (
            f.base == M
            and is_annihilation(f)
            and all(v != 0 for v in f.values)
            and primitive(f.values) == f.values
            and is_minimal_nonbasic(M)
            and irreducible_annihilation(M).values == f.values
            and (covers_all_layers(M) or not covering)
        )


@dataclass
class SizeResult:
    size: int
    raw_count: Optional[int] = None
    classes: list = field(default_factory=list)
    witness: Optional[Witness] = None
    evaluations: Optional[int] = None

    @property
    def realized(self) -> bool:
        return self.witness is not None


@dataclass
class SearchReport:
    n: int
    d: int
    mode: str
    layer_covering: bool
    sizes: dict = field(default_factory=dict)
    seed: Optional[int] = None
    budget: Optional[int] = None
    conjecture_holds: int = 0
    conjecture_fails: int = 0
    findings: list = field(default_factory=list)

    @property
    def realized_sizes(self) -> list:
        return [k for k, r in sorted(self.sizes.items()) if r.realized]


def _conjecture_applies(M: PointSet, covering: bool) -> bool:
    return covering and M.d == 3 and M.shape.is_uniform


def _record_conjecture(report: SearchReport, M: PointSet, f: WeightFunction) -> None:
    rec = conjecture_record(M, f)
    if rec.holds:
        report.conjecture_holds += 1
    else:
        report.conjecture_fails += 1
        report.findings.append({
            "kind": "conjecture_counterexample",
            "points": [list(p) for p in M.points],
            "values": list(f.values),
            "sum_abs": rec.sum_abs,
            "rhs": rec.rhs,
        })
        log.warning("conjecture counterexample: %s", M.points)


def exhaustive_estimate(n: int, d: int, k: int) -> int:
    return comb(n ** d, k)


def exhaustive_feasible(n: int, d: int, k: int) -> bool:
    return n ** d <= EXHAUSTIVE_POINT_LIMIT or exhaustive_estimate(n, d, k) <= EXHAUSTIVE_SUBSET_LIMIT


def enumerate_minimal_nonbasic(n: int, d: int, k: int, layer_covering: bool = True,
                               force: bool = False, jobs: int = 1,
                               report: Optional[SearchReport] = None) -> SearchReport:
    """Every minimal non-basic subset of ``[n]^d`` of size ``k``, up to symmetry.

    The report lists one canonical representative per symmetry class with
    its irreducible annihilation function, plus the raw (unreduced) count.
    """
    if not force and not exhaustive_feasible(n, d, k):
        raise SearchRefused(n, d, k, exhaustive_estimate(n, d, k))
    if report is None:
        report = SearchReport(n, d, "exhaustive", layer_covering)
    grid = _Grid(n, d)
    N = len(grid.points)
    tasks = [(n, d, k, layer_covering, first) for first in range(N)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_circuits_task, tasks))
    else:
        chunks = [_circuits_from(grid, k, layer_covering, first) for first in range(N)]
    hits = sorted(h for chunk in chunks for h in chunk)
    base = n + 1
    codes_of = [sum(x * base ** (d - 1 - i) for i, x in enumerate(p)) for p in grid.points]
    seen = set()
    classes = {}
    for idxs, coeffs in hits:
        key = tuple(codes_of[i] for i in idxs)
        if key in seen:
            continue
        M = PointSet(grid.shape, tuple(grid.points[i] for i in idxs))
        canon, orbit = orbit_codes(M)
        seen |= orbit
        classes[canon] = _decode(M, canon)
    result = SizeResult(k, raw_count=len(hits))
    for key in sorted(classes):
        C = classes[key]
        f = irreducible_annihilation(C)
        result.classes.append(Witness(C, f))
        if _conjecture_applies(C, layer_covering):
            _record_conjecture(report, C, f)
    if result.classes:
        result.witness = result.classes[0]
    report.sizes[k] = result
    return report


# ---------------------------------------------------------------------------
# randomized search


def _restart(grid: _Grid, k: int, covering: bool, seed: int, index: int, moves: int) -> tuple:
    """One seeded restart: random independent ``(k-1)``-set, closed by one point.

    When no closing point yields a covering circuit of size ``k``, one point
    of the independent set is swapped for an outside point; the swap is kept
    when the best candidate's score (layers covered, circuit size) does not
    drop.  Returns ``(hits, evaluations)``.
    """
    rng = np.random.default_rng([seed, index])
    N = len(grid.points)
    order = [int(i) for i in rng.permutation(N)]

    def build(members):
        ech = _Echelon(k)
        kept = []
        for q in members:
            if len(kept) == k - 1:
                break
            x, c = ech.reduce(grid.rows[q], len(kept))
            if any(x):
                ech.push(x, c)
                kept.append(q)
        return ech, kept

    ech, B = build(order)
    if len(B) < k - 1:
        return [], 0
    evals = 0

    def evaluate(ech, B):
        nonlocal evals
        hits, best = [], (-1, -1)
        inB = set(B)
        for q in range(N):
            if q in inB:
                continue
            evals += 1
            x, c = ech.reduce(grid.rows[q], k - 1)
            if any(x):
                continue
            support = [B[j] for j in range(k - 1) if c[j]] + [q]
            covered = len({col for s in support for col in grid.cols[s]})
            score = (covered, len(support))
            best = max(best, score)
            if len(support) == k and (covered == grid.L or not covering):
                hits.append(tuple(sorted(support)))
        return hits, best

    hits, score = evaluate(ech, B)
    for _ in range(moves):
        if hits:
            break
        out_pos = int(rng.integers(k - 1))
        inB = set(B)
        outside = [q for q in range(N) if q not in inB]
        q_in = outside[int(rng.integers(len(outside)))]
        trial = B[:out_pos] + B[out_pos + 1:] + [q_in]
        ech2, B2 = build(trial)
        if len(B2) < k - 1:
            continue
        hits2, score2 = evaluate(ech2, B2)
        if hits2 or score2 >= score:
            ech, B, hits, score = ech2, B2, hits2, score2
    return sorted(set(hits)), evals


def _restart_task(args):
    n, d, k, covering, seed, index, moves = args
    return _restart(_Grid(n, d), k, covering, seed, index, moves)


def random_search(n: int, d: int, k: int, seed: int = 0, budget: int = 10_000,
                  layer_covering: bool = True, jobs: int = 1, moves: int = 20,
                  stop_at_first: bool = True,
                  report: Optional[SearchReport] = None) -> SearchReport:
    """Seeded restarts until ``budget`` candidate evaluations are spent.

    Restart ``i`` draws from its own stream seeded by ``(seed, i)`` and the
    results are consumed in restart order, so the report does not depend on
    ``jobs``.
    """
    if report is None:
        report = SearchReport(n, d, "random", layer_covering, seed=seed, budget=budget)
    grid = _Grid(n, d)
    found = {}
    spent = 0
    index = 0
    batch = max(1, jobs)
    done = False
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        while not done and spent < budget and k >= 2:
            args = [(n, d, k, layer_covering, seed, index + j, moves) for j in range(batch)]
            if pool is not None:
                results = list(pool.map(_restart_task, args))
            else:
                results = [_restart(grid, k, layer_covering, seed, index + j, moves) for j in range(batch)]
            for hits, evals in results:
                index += 1
                spent += evals
                for h in hits:
                    M = PointSet(grid.shape, tuple(grid.points[i] for i in h))
                    C = canonical_form(M)
                    found.setdefault(C.points, C)
                if (found and stop_at_first) or spent >= budget or evals == 0:
                    done = True
                    break
    finally:
        if pool is not None:
            pool.shutdown()
    result = SizeResult(k, evaluations=spent)
    for key in sorted(found):
        C = found[key]
        f = irreducible_annihilation(C)
        result.classes.append(Witness(C, f))
        if _conjecture_applies(C, layer_covering):
            _record_conjecture(report, C, f)
    if result.classes:
        result.witness = result.classes[0]
    report.sizes[k] = result
    return report


# ---------------------------------------------------------------------------
# conjecture and reachability


@dataclass(frozen=True)
class ConjectureRecord:
    sum_abs: int
    rhs: int

    @property
    def holds(self) -> bool:
        return self.sum_abs == self.rhs


def conjecture_record(M: PointSet, f: WeightFunction) -> ConjectureRecord:
    return ConjectureRecord(sum(abs(v) for v in f.values), 2 * (len(M) - M.shape.n))


def check_conjecture(M: PointSet) -> ConjectureRecord:
    """Compare the total absolute annihilation mass with ``2(|M| - n)``.

    Only meaningful for minimal non-basic, layer-covering sets in a cube of
    dimension 3; anything else is rejected with the failed condition named.
    """
    if M.d != 3:
        raise PreconditionError(f"the conjecture concerns d = 3, got d = {M.d}")
    if not M.shape.is_uniform:
        raise PreconditionError("the conjecture concerns cubes [n]^3")
    if not covers_all_layers(M):
        missing = [str(lay) for lay, c in M.layer_counts().items() if c == 0]
        raise PreconditionError(f"the set misses layer(s) {', '.join(missing)}")
    if not is_minimal_nonbasic(M):
        raise PreconditionError("the set is not minimal non-basic")
    return conjecture_record(M, irreducible_annihilation(M))


def size_range(n: int, d: int) -> range:
    """Sizes allowed for minimal non-basic layer-covering sets: ``2n .. dn-(d-2)``."""
    return range(2 * n, d * n - (d - 2) + 1)


def reachability_report(n: int, d: int, seed: int = 0, budget: int = 200_000,
                        jobs: int = 1, force_random: bool = False) -> SearchReport:
    """Which sizes between the two bounds carry a minimal non-basic covering set.

    Grids with at most ``EXHAUSTIVE_POINT_LIMIT`` points are scanned
    exhaustively; larger ones fall back to :func:`random_search`.
    """
    exhaustive = n ** d <= EXHAUSTIVE_POINT_LIMIT and not force_random
    report = SearchReport(n, d, "exhaustive" if exhaustive else "random", True,
                          seed=None if exhaustive else seed,
                          budget=None if exhaustive else budget)
    for k in size_range(n, d):
        if exhaustive:
            enumerate_minimal_nonbasic(n, d, k, True, jobs=jobs, report=report)
        else:
            random_search(n, d, k, seed=seed, budget=budget, jobs=jobs, report=report)
    return report
