"""Acceptance criteria 1-10, one test each.

Every test prints a single ``criterion N: PASS|FAIL`` line (visible with
``pytest -s`` or in the tee'd ``-v`` log) and asserts its time budget.
"""
import io
import random
import time
from contextlib import contextmanager
from functools import lru_cache
from itertools import combinations, combinations_with_replacement

import pytest

from basicsets.basis import (
    annihilation_basis,
    irreducible_annihilation,
    is_basic,
    is_basic_2d_fast,
    is_minimal_nonbasic,
    two_coloring_criterion,
)
from basicsets.cli import run
from basicsets.constructions import cross_set, staircase_set, unbounded_family
from basicsets.core import GridShape, PointSet, covers_all_layers
from basicsets.graphs import (
    BipartiteComponentError,
    MultiGraph,
    graph_is_basic,
    hypergraph_from_set,
    hypergraph_is_basic,
    incidence_sums,
    solve_edge_weights,
)
from basicsets.rectangles import RectangleTerm, decompose_into_rectangles, eval_rectangles, verify_decomposition
from basicsets.search import check_conjecture, conjecture_record, reachability_report
from oracles import (
    all_subsets,
    brute_basic,
    brute_minimal,
    covers,
    multigraph_rank_basic,
    normalize,
    sympy_left_kernel,
)

FIVE_ORDER = [(1, 1, 1), (2, 1, 1), (1, 2, 1), (1, 1, 2), (2, 2, 2)]


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def _run(number, title, budget):
        notes = []
        t0 = time.perf_counter()
        try:
            yield notes
            elapsed = time.perf_counter() - t0
            assert elapsed < budget, f"took {elapsed:.1f}s, budget {budget}s"
        except BaseException as e:
            elapsed = time.perf_counter() - t0
            with capsys.disabled():
                print(f"\ncriterion {number}: FAIL  {title} ({elapsed:.2f}s) {type(e).__name__}: {e}")
            raise
        extra = ("; " + "; ".join(notes)) if notes else ""
        with capsys.disabled():
            print(f"\ncriterion {number}: PASS  {title} ({elapsed:.2f}s{extra})")

    return _run


@lru_cache(maxsize=None)
def report(n, d):
    return reachability_report(n, d)


def test_criterion_1_worked_examples(criterion):
    with criterion(1, "worked examples classified exactly", 1.0):
        ex1 = PointSet.of([(2, 1, 1), (1, 2, 1), (1, 1, 2), (2, 2, 2)], 2)
        v = is_basic(ex1)
        assert v.basic and v.verify(ex1)

        five = PointSet.of(FIVE_ORDER, 2)
        v = is_basic(five)
        assert not v.basic and v.verify(five)
        f = irreducible_annihilation(five)
        assert [f[p] for p in FIVE_ORDER] == [2, -1, -1, -1, 1]

        not_minimal = PointSet.of([(1, 1, 1), (2, 1, 1), (1, 2, 1), (1, 1, 2), (2, 2, 1)], 2)
        assert not is_basic(not_minimal).basic
        assert not is_minimal_nonbasic(not_minimal)
        g = irreducible_annihilation(not_minimal)
        assert g[(1, 1, 2)] == 0
        assert g.as_dict() == {(1, 1, 1): 1, (2, 1, 1): -1, (2, 2, 1): 1, (1, 2, 1): -1, (1, 1, 2): 0}


def test_criterion_2_oracle_equivalence(criterion):
    with criterion(2, "is_basic agrees with four other deciders on every small subset", 300) as notes:
        checked = disagreements = 0
        for sides in [(2, 2), (3, 3), (2, 2, 2)]:
            shape = GridShape(sides)
            for pts in all_subsets(sides):
                M = PointSet(shape, pts)
                verdict = is_basic(M).basic
                others = [brute_basic(pts, sides), hypergraph_is_basic(hypergraph_from_set(M)).basic]
                if len(sides) == 2:
                    others.append(is_basic_2d_fast(M))
                if all(c in (0, 2) for c in M.layer_counts().values()):
                    others.append(two_coloring_criterion(M) is None)
                disagreements += sum(o != verdict for o in others)
                checked += 1
        notes.append(f"{checked} subsets, {disagreements} disagreements")
        assert checked == 16 + 512 + 256
        assert disagreements == 0


def test_criterion_3_basic_size_bound(criterion):
    with criterion(3, "largest basic subsets have dn-(d-1) points", 60) as notes:
        for sides, bound in [((2, 2), 3), ((3, 3), 5)]:
            best = max(len(pts) for pts in all_subsets(sides) if is_basic(PointSet(GridShape(sides), pts)).basic)
            assert best == bound
            notes.append(f"max over {sides}: {best}")
        for n in (2, 3, 4):
            for d in (2, 3, 4):
                M = cross_set(n, d).points
                assert len(M) == d * n - (d - 1)
                assert is_basic(M).basic and brute_basic(M.points, M.shape.sides)


def test_criterion_4_minimal_size_bounds(criterion):
    with criterion(4, "minimal non-basic covering sets of [2]^3 have 4 or 5 points; staircases are minimal", 300) as notes:
        sizes = {}
        for pts in all_subsets((2, 2, 2)):
            if not covers(pts, (2, 2, 2)):
                continue
            M = PointSet(GridShape.cube(2, 3), pts)
            minimal = is_minimal_nonbasic(M)
            assert minimal == brute_minimal(pts, (2, 2, 2))
            if minimal:
                sizes[len(pts)] = sizes.get(len(pts), 0) + 1
        assert set(sizes) <= {4, 5} and sizes
        notes.append(f"[2]^3 counts by size {dict(sorted(sizes.items()))}")
        for n in range(2, 6):
            for d in range(2, 5):
                S = staircase_set(n, d).points
                assert len(S) == 2 * n
                assert is_minimal_nonbasic(S)


def _all_multigraphs(max_vertices, max_edges):
    for nv in range(1, max_vertices + 1):
        pairs = list(combinations(range(nv), 2))
        for m in range(max_edges + 1):
            for edges in combinations_with_replacement(pairs, m):
                yield MultiGraph(nv, edges)


def _random_multigraph(rng):
    nv = rng.randint(1, 10)
    edges = []
    for _ in range(rng.randint(0, 15)):
        if nv < 2:
            break
        u, v = rng.sample(range(nv), 2)
        edges.append((u, v))
    return MultiGraph(nv, tuple(edges))


def test_criterion_5_bipartite_criterion(criterion):
    with criterion(5, "bipartite-component verdict equals incidence rank on multigraphs", 120) as notes:
        rng = random.Random(20240605)
        graphs = list(_all_multigraphs(5, 6))
        exhaustive = len(graphs)
        graphs += [_random_multigraph(rng) for _ in range(500)]
        disagreements = solved = 0
        for G in graphs:
            v = graph_is_basic(G)
            disagreements += v.basic != multigraph_rank_basic(G.nvertices, G.edges)
            assert v.verify(G)
            w = [rng.randint(-9, 9) for _ in range(G.nvertices)]
            if v.basic:
                assert incidence_sums(G, solve_edge_weights(G, w)) == w
                solved += 1
            else:
                with pytest.raises(BipartiteComponentError):
                    solve_edge_weights(G, w)
        notes.append(f"{exhaustive} exhaustive + 500 random graphs, {solved} solved, {disagreements} disagreements")
        assert disagreements == 0


def test_criterion_6_unbounded_values(criterion):
    with criterion(6, "unbounded family is minimal with maximum |value| m", 10):
        for m in range(1, 6):
            M = unbounded_family(m).points
            assert is_minimal_nonbasic(M)
            basis = annihilation_basis(M)
            assert len(basis) == 1
            assert max(abs(v) for v in basis[0].values) == m


def _random_annihilation(rng):
    n, d = rng.randint(2, 4), rng.randint(2, 3)
    shape = GridShape.cube(n, d)
    terms = []
    for _ in range(rng.randint(1, 8)):
        i, j = sorted(rng.sample(range(1, d + 1), 2))
        a = sorted(rng.sample(range(1, n + 1), 2))
        b = sorted(rng.sample(range(1, n + 1), 2))
        fixed = {k: rng.randint(1, n) for k in range(1, d + 1) if k not in (i, j)}
        terms.append(RectangleTerm((i, j), (tuple(a), tuple(b)), fixed, rng.choice([-2, -1, 1, 3])))
    return eval_rectangles(terms, shape)


def test_criterion_7_rectangle_round_trip(criterion):
    with criterion(7, "rectangle decompositions re-evaluate exactly within n^d terms", 300) as notes:
        rng = random.Random(7)
        functions = [_random_annihilation(rng) for _ in range(200)]
        for pts in all_subsets((2, 2, 2)):
            M = PointSet(GridShape.cube(2, 3), pts)
            if covers_all_layers(M) and is_minimal_nonbasic(M):
                functions.append(irreducible_annihilation(M))
        for g in functions:
            terms = decompose_into_rectangles(g)
            assert verify_decomposition(g, terms)
            assert len(terms) <= g.base.shape.size
        five = PointSet.of(FIVE_ORDER, 2)
        assert len(decompose_into_rectangles(irreducible_annihilation(five))) == 3
        notes.append(f"{len(functions)} functions")


def test_criterion_8_reachability(criterion):
    with criterion(8, "sizes between the bounds are realized in [3]^3 and [4]^3", 1800) as notes:
        r3 = report(3, 3)
        assert {6, 7} <= set(r3.realized_sizes)
        r4 = report(4, 3)
        assert r4.realized_sizes == [8, 9, 10, 11]
        for r in (r3, r4):
            for res in r.sizes.values():
                if res.witness is not None:
                    assert res.witness.verify()
        notes.append(f"[3]^3 realizes {r3.realized_sizes}, [4]^3 realizes {r4.realized_sizes}")


def test_criterion_9_conjecture_audit(criterion):
    with criterion(9, "annihilation mass audit on every class found in [2]^3 and [3]^3", 1800) as notes:
        holds = fails = 0
        for n in (2, 3):
            r = report(n, 3)
            found = {}
            for res in r.sizes.values():
                for w in res.classes:
                    assert w.verify()
                    # recompute both sides independently of the report
                    ref = sympy_left_kernel(w.points.points, w.points.shape.sides)
                    assert len(ref) == 1 and normalize(ref[0]) == w.annihilation.values
                    rec = check_conjecture(w.points)
                    assert rec == conjecture_record(w.points, w.annihilation)
                    assert rec.sum_abs == sum(abs(v) for v in normalize(ref[0]))
                    assert rec.rhs == 2 * (len(w.points) - n)
                    found[w.points.points] = rec
            bad = {pts: rec for pts, rec in found.items() if not rec.holds}
            assert r.conjecture_fails == len(bad) == len(r.findings)
            assert r.conjecture_holds == len(found) - len(bad)
            for item in r.findings:
                pts = tuple(map(tuple, item["points"]))
                assert pts in bad
                assert (item["sum_abs"], item["rhs"]) == (bad[pts].sum_abs, bad[pts].rhs)
            holds += r.conjecture_holds
            fails += r.conjecture_fails
        notes.append(f"holds on {holds} classes, counterexamples emitted for {fails}")


DETERMINISM_COMMANDS = [
    ["check", '{"d":3,"n":2,"points":[[1,1,1],[2,1,1],[1,2,1],[1,1,2],[2,2,2]]}', "--verify"],
    ["kernel", '{"d":2,"n":3,"points":[[1,1],[1,2],[2,1],[2,2],[3,3],[3,1]]}'],
    ["minimal", '{"d":3,"n":2,"points":[[1,1,1],[2,1,1],[1,2,1],[1,1,2],[2,2,1]]}'],
    ["decompose", '{"d":2,"n":2,"points":[[1,1],[2,1],[1,2]],"values":["1/3",1,2]}', "--verify"],
    ["rectangles", '{"d":3,"n":2,"points":[[1,1,1],[2,1,1],[1,2,1],[1,1,2],[2,2,2]],"values":[2,-1,-1,-1,1]}'],
    ["graph", '{"vertices":3,"edges":[[1,2],[2,3],[1,3]],"weights":[1,2,3]}', "--solve"],
    ["hypergraph", '{"vertices":3,"edges":[[1,2,3],[1],[2,3]]}'],
    ["construct", "unbounded", "--m", "3", "--format", "text"],
    ["search", "--n", "4", "--d", "3", "--k", "10", "--seed", "11", "--budget", "4000", "--classes"],
    ["reachability", "--n", "4", "--d", "3", "--seed", "2"],
    ["conjecture", '{"d":3,"n":2,"points":[[1,1,1],[2,1,1],[1,2,1],[1,1,2],[2,2,2]]}'],
]


def _invoke(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdin=io.StringIO(""), stdout=out, stderr=err)
    return code, out.getvalue().encode()


def test_criterion_10_determinism(criterion):
    with criterion(10, "repeated CLI runs are byte-identical", 120) as notes:
        for argv in DETERMINISM_COMMANDS:
            first = _invoke(argv)
            assert first[1], argv
            assert _invoke(argv) == first, argv
        notes.append(f"{len(DETERMINISM_COMMANDS)} commands")
