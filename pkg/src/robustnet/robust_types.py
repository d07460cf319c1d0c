import json
from dataclasses import dataclass, field, fields
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

Number = Union[int, float, Fraction]
Edge = Tuple[int, int]

# Distance matrix marker for vertex pairs with no connecting path.
UNREACHABLE = -1

BT_EXCLUDE = "exclude"
BT_INCLUDE_FULL = "include-full"
BT_INCLUDE_HALF = "include-half"
BT_MODES = (BT_EXCLUDE, BT_INCLUDE_FULL, BT_INCLUDE_HALF)
BT_MODE_ALIASES = {
    "exclude": BT_EXCLUDE,
    "full": BT_INCLUDE_FULL,
    "half": BT_INCLUDE_HALF,
    BT_INCLUDE_FULL: BT_INCLUDE_FULL,
    BT_INCLUDE_HALF: BT_INCLUDE_HALF,
}

FIRST_LESS_RELIABLE = "first_less_reliable"
SECOND_LESS_RELIABLE = "second_less_reliable"
TIE_UNDETERMINED = "tie_undetermined"


@dataclass
class RobustnessConfig:
    max_dense_n: int = 2000
    exact_rational_max_n: int = 64
    float_tolerance: float = 1e-9
    eigensolver: str = "auto"
    jacobi_max_n: int = 64
    jacobi_tolerance: float = 1e-12
    jacobi_max_sweeps: int = 100
    resistance_rel_tolerance: float = 1e-9
    cut_enumeration_budget: int = 1_000_000
    enumeration_max_edges: int = 24
    contraction_node_budget: int = 10_000_000
    spanning_tree_max_bits: int = 1_000_000
    monte_carlo_chunk_size: int = 4096
    monte_carlo_workers: int = 1
    report_probabilities: Tuple[float, ...] = (0.9, 0.99)


def build_config(overrides: Optional[Any] = None) -> RobustnessConfig:
    if overrides is None:
        return RobustnessConfig()
    if isinstance(overrides, RobustnessConfig):
        return overrides

    config = RobustnessConfig()
    known = {f.name for f in fields(RobustnessConfig)}
    for key, value in dict(overrides).items():
        if key not in known:
            continue
        if key == "report_probabilities":
            value = tuple(float(p) for p in value)
        setattr(config, key, value)
    return config


def load_config(path: str) -> Dict[str, Any]:
    with open(path, "r") as file_obj:
        return json.load(file_obj)


@dataclass
class ConnectivityReport:
    connected: bool
    kappa_v: int
    kappa_e: int
    s_count: Optional[int] = None


@dataclass
class DistanceSummary:
    dist: np.ndarray
    diameter: Number
    avg_distance: Number
    efficiency: Number
    wiener_index: Number

    @property
    def avg_distance_real(self) -> float:
        return float(self.avg_distance)

    @property
    def efficiency_real(self) -> float:
        return float(self.efficiency)


@dataclass
class BetweennessResult:
    mode: str
    vertex_scores: List[Number]
    edge_scores: Dict[Edge, Number]
    avg_vertex: Number
    avg_edge: Number
    max_edge: Number
    max_vertex: Number


@dataclass
class BetweennessRelationReport:
    n: int
    m: int
    avg_distance: Number
    avg_vertex: Number
    expected_avg_vertex: Number
    avg_edge: Number
    expected_avg_edge: Number
    vertex_relation_holds: bool
    edge_relation_holds: bool


@dataclass
class ClusteringResult:
    local: List[Fraction]
    global_coefficient: Fraction


@dataclass
class Spectrum:
    eigenvalues: np.ndarray
    zero_multiplicity: int
    solver: str = "jacobi"
    sweeps: int = 0

    @property
    def algebraic_connectivity(self) -> float:
        if len(self.eigenvalues) < 2:
            return 0.0
        return float(self.eigenvalues[1])


@dataclass
class ResistanceResult:
    pairwise: Optional[np.ndarray]
    total: float
    spectral_total: float


@dataclass
class MonteCarloEstimate:
    estimate: float
    half_width: float
    trials: int
    successes: int
    p: float
    seed: int


@dataclass
class MeasureReport:
    name: str
    n: int
    m: int
    connected: int
    kappa_v: Optional[int]
    kappa_e: Optional[int]
    diameter: Optional[Number]
    avg_distance: Optional[Number]
    efficiency: Optional[Number]
    max_edge_betweenness: Optional[Number]
    avg_vertex_betweenness: Optional[Number]
    bt_mode: str
    avg_edge_betweenness: Optional[Number]
    clustering: Optional[Number]
    algebraic_connectivity: Optional[float]
    spanning_trees: Optional[int]
    effective_resistance: Optional[float]
    reliability: Dict[str, Optional[float]] = field(default_factory=dict)
    unavailable: Dict[str, str] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)


@dataclass
class EdgeSuggestion:
    edge: Edge
    measure: str
    before: Optional[Number]
    after: Optional[Number]
    improvement: float
    deltas: Dict[str, Optional[float]] = field(default_factory=dict)
    rank: int = 0


@dataclass
class MeasureCriteria:
    measure: str
    direction: str
    improved: int = 0
    tied: int = 0
    worsened: int = 0

    @property
    def strictly_increasing(self) -> bool:
        return self.tied == 0 and self.worsened == 0 and self.improved > 0


@dataclass
class CriteriaAudit:
    n: int
    m: int
    candidates: int
    rows: List[MeasureCriteria] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)
