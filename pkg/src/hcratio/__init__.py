"""Ratio-cost analysis of similarity graphs under hierarchical clustering.

Core objects: `SimilarityGraph` and `HcTree`, the cost functions relating
them, exact detection of graphs that cluster perfectly, a constraint-based
approximation for near-perfect graphs, an exhaustive small-n oracle, and
random-graph experiments.
"""

from .approx import RootedTripletConstraint, approx_tree, build_constraints, rtc_build
from .brute import Optimum, enumerate_trees, optimal_ratio_bruteforce
from .cost import (
    CostReport,
    cost_report,
    dasgupta_cost,
    find_inconsistent_triplet,
    is_consistent,
    ratio_cost,
    total_cost,
    triplet_cost,
)
from .detect import (
    Bipartition,
    Claw,
    ClusterLabelSet,
    DetectionResult,
    Partition,
    build_bisection,
    case1_bipartition,
    case2_bipartition,
    detect_claw,
    minimal_valid_partition,
    valid_bisect,
    zero_base_cost_tree,
)
from .errors import (
    DuplicateEdge,
    HcratioError,
    InvalidDelta,
    InvalidParam,
    InvalidTriplet,
    InvalidVertex,
    InvalidWeight,
    LeafMismatch,
    NotZeroBase,
    ParseError,
    SelfLoop,
    TooLarge,
)
from .graph import (
    SimilarityGraph,
    TripletType,
    base_cost,
    load_edge_list,
    load_graph,
    load_matrix,
    min_triplet_cost,
    triplet_type,
)
from .randgraph import (
    ErModel,
    ExperimentReport,
    PlantedModel,
    ProbabilityMatrix,
    expectation_tree_total_cost,
    expected_base_cost,
    gen_er,
    gen_planted,
    predicted_rho,
    run_experiment,
)
from .tree import (
    HcTree,
    TripletRelation,
    binarize,
    parse_newick,
    serialize_newick,
)

__version__ = "0.1.0"

__all__ = [
    "SimilarityGraph", "TripletType", "base_cost", "load_edge_list",
    "load_graph", "load_matrix", "min_triplet_cost", "triplet_type",
    "HcTree", "TripletRelation", "binarize", "parse_newick", "serialize_newick",
    "CostReport", "cost_report", "dasgupta_cost", "find_inconsistent_triplet",
    "is_consistent", "ratio_cost", "total_cost", "triplet_cost",
    "Partition", "Bipartition", "Claw", "ClusterLabelSet", "DetectionResult",
    "minimal_valid_partition", "detect_claw", "case1_bipartition",
    "case2_bipartition", "valid_bisect", "build_bisection", "zero_base_cost_tree",
    "RootedTripletConstraint", "build_constraints", "rtc_build", "approx_tree",
    "Optimum", "enumerate_trees", "optimal_ratio_bruteforce",
    "ProbabilityMatrix", "ErModel", "PlantedModel", "ExperimentReport",
    "gen_er", "gen_planted", "expected_base_cost", "expectation_tree_total_cost",
    "predicted_rho", "run_experiment",
    "HcratioError", "ParseError", "DuplicateEdge", "InvalidWeight", "SelfLoop",
    "InvalidTriplet", "InvalidVertex", "LeafMismatch", "NotZeroBase",
    "InvalidDelta", "TooLarge", "InvalidParam",
]
