from .graph_core import (
    Graph,
    GraphFamily,
    complement_nonedges,
    degrees,
    generate,
    min_degree,
    parse_edge_list,
    read_edge_list,
    serialize_edge_list,
    with_edge,
    without_edge,
    write_edge_list,
)
from .connectivity import (
    connectivity_report,
    count_min_edge_cuts,
    edge_connectivity,
    is_connected,
    vertex_connectivity,
)
from .classical_metrics import all_pairs_distances, betweenness, check_betweenness_relations, clustering
from .spectral import (
    algebraic_connectivity,
    effective_graph_resistance,
    effective_resistance,
    laplacian,
    spanning_tree_count,
    spanning_tree_count_spectral,
    spectrum,
)
from .reliability import (
    ReliabilityPolynomial,
    compare_near_one,
    compare_near_zero,
    crossing_points,
    curve_csv,
    reliability_at,
    reliability_coefficients,
    reliability_monte_carlo,
    sample_curve,
)
from .measure_report import (
    MEASURE_DIRECTIONS,
    audit_edge_addition,
    build_measure_report,
    compare_graphs,
    suggest_edges,
)
from .robust_types import (
    CriteriaAudit,
    EdgeSuggestion,
    MeasureReport,
    MonteCarloEstimate,
    RobustnessConfig,
    build_config,
)
from .errors import (
    CapacityError,
    DomainError,
    GraphParseError,
    InvalidEdgeError,
    NumericError,
    RobustnetError,
    UndefinedMeasureError,
)

__all__ = [
    "Graph",
    "GraphFamily",
    "complement_nonedges",
    "degrees",
    "generate",
    "min_degree",
    "parse_edge_list",
    "read_edge_list",
    "serialize_edge_list",
    "write_edge_list",
    "with_edge",
    "without_edge",
    "connectivity_report",
    "count_min_edge_cuts",
    "edge_connectivity",
    "vertex_connectivity",
    "is_connected",
    "all_pairs_distances",
    "betweenness",
    "check_betweenness_relations",
    "clustering",
    "algebraic_connectivity",
    "effective_graph_resistance",
    "effective_resistance",
    "laplacian",
    "spanning_tree_count",
    "spanning_tree_count_spectral",
    "spectrum",
    "ReliabilityPolynomial",
    "reliability_coefficients",
    "reliability_at",
    "reliability_monte_carlo",
    "compare_near_one",
    "compare_near_zero",
    "sample_curve",
    "curve_csv",
    "crossing_points",
    "MEASURE_DIRECTIONS",
    "build_measure_report",
    "compare_graphs",
    "suggest_edges",
    "audit_edge_addition",
    "MeasureReport",
    "EdgeSuggestion",
    "CriteriaAudit",
    "MonteCarloEstimate",
    "RobustnessConfig",
    "build_config",
    "RobustnetError",
    "GraphParseError",
    "InvalidEdgeError",
    "DomainError",
    "UndefinedMeasureError",
    "CapacityError",
    "NumericError",
]
