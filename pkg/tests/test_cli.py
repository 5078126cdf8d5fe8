import io
import json
from fractions import Fraction

import pytest

from basicsets import jsonio
from basicsets.cli import run
from basicsets.core import PointSet, WeightFunction
from basicsets.rectangles import RectangleTerm

K4_SET = {"d": 3, "n": 2, "points": [[2, 1, 1], [1, 2, 1], [1, 1, 2], [2, 2, 2]]}
FIVE = {"d": 3, "n": 2, "points": [[1, 1, 1], [2, 1, 1], [1, 2, 1], [1, 1, 2], [2, 2, 2]]}


def call(*argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdin=io.StringIO(stdin), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def js(obj):
    return json.dumps(obj)


def test_check_k4_set_file(tmp_path):
    f = tmp_path / "m.json"
    f.write_text(js(K4_SET))
    code, out, _ = call("check", str(f), "--format", "text")
    assert code == 0 and out.startswith("basic")
    code, out, _ = call("check", str(f), "--verify")
    assert code == 0 and json.loads(out)["verified"] is True


def test_kernel_five_point_set():
    code, out, _ = call("kernel", js(FIVE))
    data = json.loads(out)
    assert code == 0 and data["dimension"] == 1
    w = data["basis"][0]
    got = dict(zip(map(tuple, w["points"]), w["values"]))
    assert [got[tuple(p)] for p in FIVE["points"]] == [2, -1, -1, -1, 1]


def test_check_empty_and_stdin():
    code, out, _ = call("check", js({"d": 3, "n": 2, "points": []}))
    assert code == 0 and json.loads(out)["basic"] is True
    code, out, _ = call("check", "-", "--verify", stdin=js(FIVE))
    assert code == 3 and json.loads(out)["annihilation"]["values"] == [2, -1, -1, -1, 1]


@pytest.mark.parametrize("payload,needle", [
    ('{"d": 2, "n": 2, "points": [[0, 1]]}', "points[0]"),
    ('{"d": 2, "n": 2, "points": [[1, 1, 1]]}', "points[0]"),
    ('{"d": 2, "n": 2, "points": [[1, 3]]}', "outside"),
    ('{"d": 2, "n": 2, "points": [[1, 1], [1, 1]]}', "duplicate"),
    ('{"d": 2, "points": []}', "'n'"),
    ('{"d": 2, "n": 2,\n "points": [[1, 1],]}', "line 2"),
])
def test_malformed_inputs(payload, needle):
    code, out, err = call("check", payload)
    assert code == 2 and out == "" and needle in err


def test_unknown_flag_and_missing_file():
    assert call("check", "--nope", js(FIVE))[0] == 2
    assert call("check", "/nonexistent/file.json")[0] == 2


def test_minimal_and_conjecture():
    assert call("minimal", js(FIVE))[0] == 0
    not_minimal = {"d": 3, "n": 2, "points": [[1, 1, 1], [2, 1, 1], [1, 2, 1], [1, 1, 2], [2, 2, 1]]}
    code, out, _ = call("minimal", js(not_minimal), "--verify")
    assert code == 3 and json.loads(out)["minimal"] is False and json.loads(out)["verified"]
    code, out, _ = call("conjecture", js(FIVE))
    assert code == 0 and json.loads(out) == {"holds": True, "sum_abs": 6, "rhs": 6}
    assert call("conjecture", js(K4_SET))[0] == 2


def test_decompose_both_ways():
    cross = {"d": 2, "n": 2, "points": [[1, 1], [2, 1], [1, 2]], "values": [0, 1, 2]}
    code, out, _ = call("decompose", js(cross), "--verify")
    data = json.loads(out)
    assert code == 0 and data["tables"] == [[0, 1], [0, 2]] and data["verified"]
    half = dict(cross, values=["1/2", 0, 0])
    code, out, _ = call("decompose", js(half))
    assert code == 0 and json.loads(out)["tables"] == [[0, "-1/2"], ["1/2", 0]]
    rect = {"d": 2, "n": 2, "points": [[1, 1], [1, 2], [2, 2], [2, 1]], "values": [1, 0, 0, 0]}
    code, out, _ = call("decompose", js(rect), "--verify")
    data = json.loads(out)
    assert code == 3 and data["pairing"] == 1 and data["verified"]


def test_rectangles():
    f = dict(FIVE, values=[2, -1, -1, -1, 1])
    code, out, _ = call("rectangles", js(f), "--verify")
    data = json.loads(out)
    assert code == 0 and data["count"] == 3 and data["verified"]
    terms = [jsonio.rectangle_from_json(t) for t in data["terms"]]
    assert all(isinstance(t, RectangleTerm) for t in terms)
    code, out, _ = call("rectangles", js(f), "--unit")
    assert code == 0 and json.loads(out)["count"] == 3
    bad = dict(FIVE, values=[1, 0, 0, 0, 0])
    code, out, _ = call("rectangles", js(bad))
    assert code == 3 and json.loads(out)["annihilating"] is False


def test_graph_commands():
    tri = {"vertices": 3, "edges": [[1, 2], [2, 3], [1, 3]], "weights": [1, 2, 3]}
    code, out, _ = call("graph", js(tri), "--solve", "--verify")
    assert code == 0 and json.loads(out)["edge_weights"] == [0, 2, 1]
    code, out, _ = call("graph", js({"vertices": 2, "edges": [[1, 2]], "weights": [0, 1]}), "--solve")
    assert code == 3 and json.loads(out)["bipartite_component"] == [1, 2]
    c4 = {"vertices": 4, "edges": [[1, 2], [2, 3], [3, 4], [4, 1]]}
    code, out, _ = call("graph", js(c4), "--verify")
    assert code == 3 and json.loads(out)["dependence"] == [1, -1, 1, -1]
    code, out, _ = call("graph", js(K4_SET))
    assert code == 0 and len(json.loads(out)["edges"]) == 6
    assert call("graph", js({"vertices": 2, "edges": [[1, 1]]}))[0] == 2
    assert call("graph", js({"vertices": 2, "edges": [[0, 1]]}))[0] == 2
    code, out, _ = call("hypergraph", js(FIVE), "--verify")
    assert code == 3 and json.loads(out)["dependence"] == [2, -1, -1, -1, 1]


def test_construct():
    code, out, _ = call("construct", "cross-plus-point", "--n", "2", "--d", "3", "--point", "2,2,2", "--verify")
    data = json.loads(out)
    assert code == 0 and data["values"] == [2, -1, -1, -1, 1] and data["verified"]
    code, out, _ = call("construct", "unbounded", "--m", "2")
    assert code == 0 and json.loads(out)["size"] == 14
    assert call("construct", "staircase", "--n", "3")[0] == 2
    assert call("construct", "cross-plus-point", "--n", "3", "--d", "3", "--point", "1,2,2")[0] == 2


def test_search_commands():
    code, out, _ = call("search", "--n", "2", "--d", "3", "--k", "5", "--classes", "--verify")
    data = json.loads(out)
    assert code == 0 and data["sizes"]["5"]["raw_count"] == 8 and data["verified"]
    code, _, err = call("search", "--n", "5", "--d", "3", "--k", "9", "--mode", "exhaustive")
    assert code == 4 and "refused" in err
    code, out, _ = call("reachability", "--n", "2", "--d", "3")
    assert code == 0 and json.loads(out)["realized_sizes"] == [4, 5]


def test_deterministic_output():
    argv = ["search", "--n", "4", "--d", "3", "--k", "10", "--seed", "5", "--budget", "3000"]
    assert call(*argv) == call(*argv)


def test_weight_json_round_trip():
    M = PointSet.of([(1, 2), (2, 1)], 2)
    w = WeightFunction(M, (Fraction(-3, 7), 4))
    data = jsonio.weight_to_json(w)
    assert data["values"] == ["-3/7", 4]
    assert jsonio.weight_from_json(json.loads(jsonio.dumps(data))) == w


def test_weight_json_alignment_follows_input_order():
    obj = {"d": 2, "n": 2, "points": [[2, 1], [1, 2]], "values": [5, 7]}
    w = jsonio.weight_from_json(obj)
    assert w[(2, 1)] == 5 and w[(1, 2)] == 7


def test_rectangle_json_shape():
    t = RectangleTerm((1, 3), ((1, 2), (1, 2)), {2: 1}, -1)
    assert jsonio.rectangle_to_json(t) == {"axes": [1, 3], "values": [[1, 2], [1, 2]], "fixed": {"2": 1}, "coeff": -1}
    assert jsonio.rectangle_from_json(jsonio.rectangle_to_json(t)) == t
