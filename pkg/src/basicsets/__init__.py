"""Basic subsets of the integer grid [n]^d, with exact certificates."""
from .basis import (
    BasisVerdict,
    Coloring,
    CoordinateDecomposition,
    DecompositionResult,
    KernelDimensionError,
    NotNonBasicError,
    PreconditionError,
    annihilation_basis,
    incidence_matrix,
    irreducible_annihilation,
    is_basic,
    is_basic_2d_fast,
    is_minimal_nonbasic,
    solve_additive_decomposition,
    two_coloring_criterion,
)
from .constructions import NamedFamily, cross_plus_point, cross_set, staircase_set, unbounded_family
from .core import GridError, GridShape, Layer, PointSet, WeightFunction, is_annihilation
from .graphs import Hypergraph, MultiGraph, graph_is_basic, hypergraph_is_basic, solve_edge_weights
from .rectangles import RectangleTerm, decompose_into_rectangles, verify_decomposition
from .search import (
    SearchReport,
    SearchRefused,
    canonical_form,
    check_conjecture,
    enumerate_minimal_nonbasic,
    random_search,
    reachability_report,
)

__version__ = "0.1.0"
