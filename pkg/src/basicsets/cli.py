"""Command-line front end.

Exit codes: 0 basic / success, 3 non-basic / infeasible / false,
2 malformed input, 4 refused search, 1 a certificate failed ``--verify``.
"""
from __future__ import annotations

import argparse
import logging
import sys

from . import jsonio
from .basis import (
    NotNonBasicError,
    PreconditionError,
    annihilation_basis,
    is_basic,
    is_minimal_by_kernel,
    is_minimal_nonbasic,
    solve_additive_decomposition,
)
from .constructions import cross_plus_point, cross_set, staircase_set, unbounded_family
from .core import GridError, format_point, format_weight_function, is_annihilation
from .graphs import (
    BipartiteComponentError,
    GraphError,
    GraphVerdict,
    graph_from_set,
    graph_is_basic,
    hypergraph_from_set,
    hypergraph_is_basic,
    incidence_sums,
    solve_edge_weights,
)
from .jsonio import InputError
from .rectangles import (
    NotAnnihilatingError,
    decompose_into_rectangles,
    expand_unit,
    verify_decomposition,
)
from .search import (
    SearchRefused,
    check_conjecture,
    enumerate_minimal_nonbasic,
    exhaustive_feasible,
    random_search,
    reachability_report,
    size_range,
)

OK, FAILED_VERIFY, MALFORMED, NEGATIVE, REFUSED = 0, 1, 2, 3, 4


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(f"{self.prog}: error: {message}")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--verify", action="store_true", help="re-check every emitted certificate")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="basicsets", description="Basic subsets of the grid [n]^d.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_input(name, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("input", help="JSON file, '-' for stdin, or an inline JSON object")
        return p

    with_input("check", "decide whether a point set is basic")
    with_input("kernel", "primitive basis of the annihilation functions")
    with_input("minimal", "is the set minimal non-basic")
    with_input("decompose", "write a weight function as a sum of coordinate functions")
    p = with_input("rectangles", "write an annihilation function as a sum of rectangles")
    p.add_argument("--unit", action="store_true", help="expand into unit simple functions")
    p = with_input("graph", "basicness of a multigraph (or of a set with 0 or 2 points per layer)")
    p.add_argument("--solve", action="store_true", help="solve for edge weights from 'weights'")
    p.add_argument("--allow-loops", action="store_true")
    with_input("hypergraph", "basicness of a hypergraph (or of a set's layer hypergraph)")
    with_input("conjecture", "compare the annihilation mass with 2(|M| - n)")

    p = sub.add_parser("construct", parents=[common], help="generate a named family")
    p.add_argument("family", choices=("cross", "staircase", "unbounded", "cross-plus-point"))
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--point", help="extra point for cross-plus-point, e.g. 2,3,2")

    def searchy(name, help_):
        q = sub.add_parser(name, parents=[common], help=help_)
        q.add_argument("--n", type=int, required=True)
        q.add_argument("--d", type=int, required=True)
        q.add_argument("--seed", type=int, default=0)
        q.add_argument("--budget", type=int, default=None)
        q.add_argument("--jobs", type=int, default=1)
        q.add_argument("--classes", action="store_true", help="list every class, not only the witness")
        return q

    p = searchy("search", "minimal non-basic sets of one size")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mode", choices=("auto", "exhaustive", "random"), default="auto")
    p.add_argument("--force", action="store_true", help="allow exhaustive search beyond the limits")
    p.add_argument("--covering", dest="covering", action="store_true", default=True,
                   help="only layer-covering sets (default)")
    p.add_argument("--no-covering", dest="covering", action="store_false")
    p = searchy("reachability", "which sizes between the bounds are realized")
    p.add_argument("--random", action="store_true", help="use random search even on small grids")
    return parser


# ---------------------------------------------------------------------------
# input


def _read(source: str, stdin):
    if source == "-":
        text = stdin.read()
    elif source.lstrip().startswith("{"):
        text = source
    else:
        try:
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise InputError(f"cannot read {source}: {e.strerror}") from None
    return jsonio.loads(text)


# ---------------------------------------------------------------------------
# commands; each returns (exit code, json payload, text lines, verified or None)


def _pts(points) -> str:
    return " ".join(format_point(p) for p in points) or "(empty)"


def cmd_check(args, obj):
    M = jsonio.pointset_from_json(obj)
    v = is_basic(M)
    out = jsonio.verdict_to_json(M, v)
    if v.basic:
        text = [f"basic ({len(M)} points, rank {v.rank})"]
    else:
        text = [f"non-basic ({len(M)} points, rank {v.rank})",
                "annihilation: " + format_weight_function(v.annihilation)]
    ok = v.verify(M) if args.verify else None
    return (OK if v.basic else NEGATIVE), out, text, ok


def cmd_kernel(args, obj):
    M = jsonio.pointset_from_json(obj)
    basis = annihilation_basis(M)
    out = {"dimension": len(basis), "basis": [jsonio.weight_to_json(w) for w in basis]}
    text = [f"annihilation space dimension {len(basis)}"]
    text += ["  " + format_weight_function(w) for w in basis]
    ok = None
    if args.verify:
        ok = all(is_annihilation(w) for w in basis) and len(basis) == len(M) - is_basic(M).rank
    return OK, out, text, ok


def cmd_minimal(args, obj):
    M = jsonio.pointset_from_json(obj)
    minimal = is_minimal_nonbasic(M)
    basis = annihilation_basis(M)
    out = {"minimal": minimal, "basic": not basis, "kernel_dimension": len(basis)}
    text = ["minimal non-basic" if minimal else ("basic" if not basis else "non-basic, not minimal")]
    if len(basis) == 1:
        out["annihilation"] = jsonio.weight_to_json(basis[0])
        text.append("annihilation: " + format_weight_function(basis[0]))
    ok = (is_minimal_by_kernel(M) == minimal) if args.verify else None
    return (OK if minimal else NEGATIVE), out, text, ok


def cmd_decompose(args, obj):
    f = jsonio.weight_from_json(obj)
    M = f.base
    res = solve_additive_decomposition(M, f)
    if res.feasible:
        dec = res.decomposition
        out = {"feasible": True, **jsonio.decomposition_to_json(dec)}
        text = ["feasible"] + [
            f"f{i}: " + ", ".join(f"{j}->{jsonio.number_to_json(x)}" for j, x in enumerate(t, 1))
            for i, t in enumerate(dec.tables, 1)
        ]
        ok = dec.reproduces(f) if args.verify else None
        return OK, out, text, ok
    g = res.certificate
    out = {"feasible": False, "certificate": jsonio.weight_to_json(g),
           "pairing": jsonio.number_to_json(g.dot(f))}
    text = ["infeasible", "certificate: " + format_weight_function(g),
            f"pairing with f: {jsonio.number_to_json(g.dot(f))}"]
    ok = (is_annihilation(g) and g.dot(f) != 0) if args.verify else None
    return NEGATIVE, out, text, ok


def cmd_rectangles(args, obj):
    g = jsonio.weight_from_json(obj)
    if not all(isinstance(v, int) for v in g.values):
        raise InputError("field 'values': rectangle decompositions need integer values")
    try:
        terms = decompose_into_rectangles(g)
    except NotAnnihilatingError as e:
        out = {"annihilating": False, "violated_layers": [list(lay) for lay in e.layers]}
        return NEGATIVE, out, [str(e)], None
    d = g.base.d
    if args.unit:
        quads = expand_unit(terms, d)
        out = {"annihilating": True, "count": len(quads), "quads": [[list(p) for p in q] for q in quads]}
        text = [f"{len(quads)} unit simple functions"] + ["  " + _pts(q) for q in quads]
    else:
        out = {"annihilating": True, "count": len(terms),
               "terms": [jsonio.rectangle_to_json(t) for t in terms]}
        text = [f"{len(terms)} rectangle terms"]
        for t in terms:
            text.append(f"  {t.coeff:+d} * " + _pts(t.vertices(d)))
    ok = verify_decomposition(g, terms) if args.verify else None
    return OK, out, text, ok


def _graph_verdict_json(v: GraphVerdict) -> dict:
    out = {"basic": v.basic}
    if v.dependence is not None:
        out["dependence"] = list(v.dependence)
    if v.component is not None:
        out["bipartite_component"] = [u + 1 for u in v.component]
    return out


def _graph_text(v: GraphVerdict) -> list:
    if v.basic:
        return ["basic"]
    text = ["non-basic", "dependence: " + " ".join(str(x) for x in v.dependence)]
    if v.component is not None:
        text.append("bipartite component: " + " ".join(str(u + 1) for u in v.component))
    return text


def cmd_graph(args, obj):
    if isinstance(obj, dict) and "points" in obj:
        try:
            G = graph_from_set(jsonio.pointset_from_json(obj))
        except GraphError as e:
            raise InputError(str(e)) from None
    else:
        G = jsonio.graph_from_json(obj, allow_loops=args.allow_loops)
    if args.solve:
        weights = jsonio.vertex_weights_from_json(obj, G.nvertices)
        try:
            x = solve_edge_weights(G, weights)
        except BipartiteComponentError as e:
            comp = [u + 1 for u in e.component]
            out = {"solvable": False, "bipartite_component": comp}
            return NEGATIVE, out, ["bipartite component: " + " ".join(map(str, comp))], None
        vals = [jsonio.number_to_json(v) for v in x]
        out = {"solvable": True, "edge_weights": vals}
        ok = (incidence_sums(G, x) == list(weights)) if args.verify else None
        return OK, out, ["edge weights: " + " ".join(map(str, vals))], ok
    v = graph_is_basic(G)
    out = {**jsonio.graph_to_json(G), **_graph_verdict_json(v)}
    ok = v.verify(G) if args.verify else None
    return (OK if v.basic else NEGATIVE), out, _graph_text(v), ok


def cmd_hypergraph(args, obj):
    if isinstance(obj, dict) and "points" in obj:
        H = hypergraph_from_set(jsonio.pointset_from_json(obj))
    else:
        H = jsonio.hypergraph_from_json(obj)
    v = hypergraph_is_basic(H)
    out = {**jsonio.graph_to_json(H), **_graph_verdict_json(v)}
    ok = v.verify(H) if args.verify else None
    return (OK if v.basic else NEGATIVE), out, _graph_text(v), ok


def cmd_construct(args, obj):
    fam = args.family

    def need(*names):
        missing = [x for x in names if getattr(args, x) is None]
        if missing:
            raise InputError(f"construct {fam} needs --" + ", --".join(missing))

    try:
        if fam == "cross":
            need("n", "d")
            F = cross_set(args.n, args.d)
        elif fam == "staircase":
            need("n", "d")
            F = staircase_set(args.n, args.d)
        elif fam == "unbounded":
            need("m")
            F = unbounded_family(args.m)
        else:
            need("n", "d", "point")
            try:
                X = tuple(int(x) for x in args.point.split(","))
            except ValueError:
                raise InputError(f"--point: expected comma-separated integers, got {args.point!r}") from None
            F = cross_plus_point(args.n, args.d, X)
    except GridError as e:
        raise InputError(str(e)) from None
    out = jsonio.family_to_json(F)
    text = [f"{F.tag} {F.params}: {len(F.points)} points", _pts(F.points.points)]
    if F.claimed_annihilation is not None:
        text.append("annihilation: " + format_weight_function(F.claimed_annihilation))
    ok = None
    if args.verify:
        if F.claimed_annihilation is None:
            ok = is_basic(F.points).basic
        else:
            ok = is_annihilation(F.claimed_annihilation)
    return OK, out, text, ok


def _report_text(report) -> list:
    text = [f"[{report.n}]^{report.d} {report.mode} search, covering={report.layer_covering}"]
    for k, r in sorted(report.sizes.items()):
        line = f"size {k}: " + ("realized" if r.realized else "not found")
        if r.raw_count is not None:
            line += f", {r.raw_count} sets in {len(r.classes)} classes"
        text.append(line)
        if r.witness is not None:
            text.append("  " + format_weight_function(r.witness.annihilation))
    text.append("realized sizes: " + " ".join(map(str, report.realized_sizes)))
    if report.conjecture_holds or report.conjecture_fails:
        text.append(f"conjecture: holds on {report.conjecture_holds}, fails on {report.conjecture_fails}")
    for f in report.findings:
        text.append(f"finding {f['kind']}: sum |f| = {f['sum_abs']}, 2(|M|-n) = {f['rhs']}")
    return text


def _verify_report(report) -> bool:
    for r in report.sizes.values():
        for w in ([r.witness] if r.witness else []) + list(r.classes):
            if not w.verify(report.layer_covering):
                return False
    return True


def cmd_search(args, obj):
    mode = args.mode
    if mode == "auto":
        mode = "exhaustive" if exhaustive_feasible(args.n, args.d, args.k) else "random"
    if mode == "exhaustive":
        report = enumerate_minimal_nonbasic(args.n, args.d, args.k, args.covering,
                                            force=args.force, jobs=args.jobs)
    else:
        budget = 10_000 if args.budget is None else args.budget
        report = random_search(args.n, args.d, args.k, seed=args.seed, budget=budget,
                               layer_covering=args.covering, jobs=args.jobs)
    out = jsonio.report_to_json(report, include_classes=args.classes)
    ok = _verify_report(report) if args.verify else None
    return (OK if report.realized_sizes else NEGATIVE), out, _report_text(report), ok


def cmd_reachability(args, obj):
    budget = 200_000 if args.budget is None else args.budget
    report = reachability_report(args.n, args.d, seed=args.seed, budget=budget,
                                 jobs=args.jobs, force_random=args.random)
    out = jsonio.report_to_json(report, include_classes=args.classes)
    out["size_range"] = list(size_range(args.n, args.d))
    ok = _verify_report(report) if args.verify else None
    every = len(report.realized_sizes) == len(size_range(args.n, args.d))
    return (OK if every else NEGATIVE), out, _report_text(report), ok


def cmd_conjecture(args, obj):
    M = jsonio.pointset_from_json(obj)
    try:
        rec = check_conjecture(M)
    except (PreconditionError, NotNonBasicError) as e:
        raise InputError(f"precondition failed: {e}") from None
    out = {"holds": rec.holds, "sum_abs": rec.sum_abs, "rhs": rec.rhs}
    text = [("holds" if rec.holds else "counterexample") + f": sum |f| = {rec.sum_abs}, 2(|M|-n) = {rec.rhs}"]
    return (OK if rec.holds else NEGATIVE), out, text, None


COMMANDS = {
    "check": cmd_check,
    "kernel": cmd_kernel,
    "minimal": cmd_minimal,
    "decompose": cmd_decompose,
    "rectangles": cmd_rectangles,
    "graph": cmd_graph,
    "hypergraph": cmd_hypergraph,
    "construct": cmd_construct,
    "search": cmd_search,
    "reachability": cmd_reachability,
    "conjecture": cmd_conjecture,
}

_NO_INPUT = {"construct", "search", "reachability"}


def run(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _Usage as e:
        print(str(e), file=stderr)
        return MALFORMED
    except SystemExit as e:  # --help
        return int(e.code or 0)
    try:
        obj = None if args.command in _NO_INPUT else _read(args.input, stdin)
        code, out, text, ok = COMMANDS[args.command](args, obj)
    except InputError as e:
        print(f"error: {e}", file=stderr)
        return MALFORMED
    except SearchRefused as e:
        print(f"refused: {e}", file=stderr)
        return REFUSED
    if ok is not None:
        out["verified"] = ok
        text.append("verified" if ok else "VERIFICATION FAILED")
    if args.format == "json":
        stdout.write(jsonio.dumps(out) + "\n")
    else:
        stdout.write("\n".join(text) + "\n")
    if ok is False:
        print("error: certificate failed verification", file=stderr)
        return FAILED_VERIFY
    return code


def main() -> None:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    sys.exit(run())


if __name__ == "__main__":
    main()
