"""Doubly-weighted graphs and hypergraphs.

A (hyper)graph is basic when every vertex weighting is the incidence sum of
some edge weighting, i.e. when the vertex co-boundaries (rows of the
incidence matrix) are linearly independent.  For ordinary multigraphs that
happens exactly when no connected component is bipartite.

Vertices are 0-indexed in memory; the JSON layer shifts to 1-indexed.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .core import PointSet
from .exactlin import ExactMatrix, left_kernel_primitive, rank_exact, solve_exact


class GraphError(ValueError):
    pass


class BipartiteComponentError(GraphError):
    """The graph has a bipartite component, so some vertex weights are unreachable."""

    def __init__(self, component, parts):
        self.component = tuple(component)
        self.parts = parts
        super().__init__(f"bipartite component on vertices {list(self.component)}")


@dataclass(frozen=True)
class Hypergraph:
    nvertices: int
    edges: tuple

    def __post_init__(self):
        edges = tuple(tuple(sorted(set(e))) for e in self.edges)
        for k, e in enumerate(edges):
            if not e:
                raise GraphError(f"hyperedge {k} is empty")
            if e[0] < 0 or e[-1] >= self.nvertices:
                raise GraphError(f"hyperedge {k} mentions a vertex outside [0, {self.nvertices})")
        object.__setattr__(self, "edges", edges)

    def incidence_matrix(self) -> ExactMatrix:
        """Rows are vertices, columns edges."""
        rows = [[0] * len(self.edges) for _ in range(self.nvertices)]
        for k, e in enumerate(self.edges):
            for v in e:
                rows[v][k] = 1
        return ExactMatrix(tuple(tuple(r) for r in rows), len(self.edges))


@dataclass(frozen=True)
class MultiGraph:
    nvertices: int
    edges: tuple
    allow_loops: bool = False

    def __post_init__(self):
        edges = tuple((min(u, v), max(u, v)) for u, v in self.edges)
        for k, (u, v) in enumerate(edges):
            if u < 0 or v >= self.nvertices:
                raise GraphError(f"edge {k} = {(u, v)} has an endpoint outside [0, {self.nvertices})")
            if u == v and not self.allow_loops:
                raise GraphError(f"edge {k} is a self-loop at vertex {u}")
        object.__setattr__(self, "edges", edges)

    def as_hypergraph(self) -> Hypergraph:
        return Hypergraph(self.nvertices, self.edges)

    def incidence_matrix(self) -> ExactMatrix:
        return self.as_hypergraph().incidence_matrix()

    def adjacency(self) -> list:
        adj = [[] for _ in range(self.nvertices)]
        for u, v in self.edges:
            adj[u].append(v)
            if u != v:
                adj[v].append(u)
        return adj


def hypergraph_from_set(M: PointSet) -> Hypergraph:
    """One hyperedge per nonempty layer (axis-major order); vertices are the points."""
    by_layer = {}
    for idx, p in enumerate(M.points):
        for i, x in enumerate(p):
            by_layer.setdefault((i, x), []).append(idx)
    return Hypergraph(len(M), tuple(by_layer[k] for k in sorted(by_layer)))


def graph_from_set(M: PointSet) -> MultiGraph:
    for layer, c in M.layer_counts().items():
        if c not in (0, 2):
            raise GraphError(f"layer {layer} contains {c} points; a graph needs 0 or 2")
    return MultiGraph(len(M), hypergraph_from_set(M).edges)


def coboundary(H: Hypergraph, v: int) -> tuple:
    if not 0 <= v < H.nvertices:
        raise GraphError(f"vertex {v} outside [0, {H.nvertices})")
    return tuple(int(v in e) for e in H.edges)


@dataclass(frozen=True)
class GraphVerdict:
    """``dependence`` is a primitive ``lambda`` with ``sum lambda_v delta_v = 0``."""

    basic: bool
    dependence: Optional[tuple] = None
    component: Optional[tuple] = None

    def verify(self, H) -> bool:
        if isinstance(H, MultiGraph):
            H = H.as_hypergraph()
        A = H.incidence_matrix()
        if self.basic:
            return self.dependence is None and rank_exact(A) == H.nvertices
        lam = self.dependence
        return (
            lam is not None
            and len(lam) == H.nvertices
            and any(lam)
            and not any(A.vecmat(lam))
        )


def hypergraph_is_basic(H: Hypergraph) -> GraphVerdict:
    if H.nvertices == 0:
        return GraphVerdict(True)
    kernel = left_kernel_primitive(H.incidence_matrix())
    if not kernel:
        return GraphVerdict(True)
    return GraphVerdict(False, kernel[0])


def psi_kernel_dimension(H: Hypergraph) -> int:
    """Dimension of the kernel of the map sending ``1_v`` to its co-boundary."""
    if H.nvertices == 0:
        return 0
    return H.nvertices - rank_exact(H.incidence_matrix())


def bipartite_components(G: MultiGraph) -> list:
    """``[(component, color)]`` for every bipartite component, in vertex order.

    ``color`` maps each component vertex to +1 or -1, the smallest vertex
    getting +1.  A loop is an odd cycle.
    """
    adj = G.adjacency()
    loops = {u for u, v in G.edges if u == v}
    color = [0] * G.nvertices
    found = []
    for s in range(G.nvertices):
        if color[s]:
            continue
        color[s] = 1
        comp = [s]
        ok = s not in loops
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w == u:
                    continue
                if not color[w]:
                    color[w] = -color[u]
                    comp.append(w)
                    queue.append(w)
                    if w in loops:
                        ok = False
                elif color[w] == color[u]:
                    ok = False
        if ok:
            comp.sort()
            found.append((tuple(comp), {v: color[v] for v in comp}))
    return found


def graph_is_basic(G: MultiGraph) -> GraphVerdict:
    """Basic iff no connected component is bipartite.

    A non-basic verdict carries the ``+-1`` split of the first bipartite
    component (zero elsewhere), which is a dependence among co-boundaries.
    """
    comps = bipartite_components(G)
    if not comps:
        return GraphVerdict(True)
    comp, col = comps[0]
    lam = tuple(col.get(v, 0) for v in range(G.nvertices))
    return GraphVerdict(False, lam, comp)


def solve_edge_weights(G: MultiGraph, vertex_weights) -> list:
    """Edge weights whose incidence sums reproduce ``vertex_weights`` exactly."""
    if len(vertex_weights) != G.nvertices:
        raise GraphError(f"{len(vertex_weights)} vertex weights for {G.nvertices} vertices")
    comps = bipartite_components(G)
    if comps:
        comp, col = comps[0]
        raise BipartiteComponentError(comp, col)
    if G.nvertices == 0:
        return [0] * len(G.edges)
    x = solve_exact(G.incidence_matrix(), list(vertex_weights))
    if x is None:
        raise AssertionError("non-bipartite graph produced an inconsistent system")
    return x


def incidence_sums(G, edge_weights) -> list:
    H = G.as_hypergraph() if isinstance(G, MultiGraph) else G
    return H.incidence_matrix().matvec(list(edge_weights))
