"""Shortest-path measures, betweenness and clustering.

Exact `Fraction` arithmetic is used up to `RobustnessConfig.exact_rational_max_n`
vertices; larger graphs fall back to floats.
"""

import logging
import math
from collections import deque
from fractions import Fraction
from typing import Dict, List, Optional

import numpy as np

from .errors import DomainError, UndefinedMeasureError
from .connectivity import is_connected
from .graph_core import Graph
from .robust_types import (
    BT_INCLUDE_FULL,
    BT_INCLUDE_HALF,
    BT_MODE_ALIASES,
    BetweennessRelationReport,
    BetweennessResult,
    ClusteringResult,
    DistanceSummary,
    Edge,
    Number,
    RobustnessConfig,
    UNREACHABLE,
    build_config,
)

logger = logging.getLogger(__name__)

RELATION_TOLERANCE = 1e-12


def _exact(g: Graph, config: RobustnessConfig) -> bool:
    return g.n <= config.exact_rational_max_n


def _ratio(num: int, den: int, exact: bool) -> Number:
    return Fraction(num, den) if exact else num / den


def _bfs_distances(g: Graph, source: int) -> List[int]:
    dist = [UNREACHABLE] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in g.adjacency[v]:
            if dist[w] == UNREACHABLE:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def all_pairs_distances(g: Graph, config: Optional[RobustnessConfig] = None) -> DistanceSummary:
    config = build_config(config)
    exact = _exact(g, config)
    dist = np.array([_bfs_distances(g, s) for s in range(g.n)], dtype=np.int64)

    if g.n < 2:
        return DistanceSummary(dist=dist, diameter=None, avg_distance=None, efficiency=None, wiener_index=0)

    upper = dist[np.triu_indices(g.n, k=1)]
    reachable = upper[upper != UNREACHABLE]
    pairs = g.n * (g.n - 1) // 2
    connected = len(reachable) == pairs

    # efficiency only needs how many pairs sit at each hop count
    hop_counts = np.bincount(reachable) if len(reachable) else np.zeros(1, dtype=np.int64)
    reciprocal_sum: Number = Fraction(0) if exact else 0.0
    for hops in range(1, len(hop_counts)):
        if hop_counts[hops]:
            reciprocal_sum += _ratio(int(hop_counts[hops]), hops, exact)
    efficiency = reciprocal_sum / pairs

    if connected:
        wiener = int(reachable.sum())
        diameter: Number = int(reachable.max())
        avg_distance: Number = _ratio(wiener, pairs, exact)
    else:
        wiener = math.inf
        diameter = math.inf
        avg_distance = math.inf

    return DistanceSummary(
        dist=dist,
        diameter=diameter,
        avg_distance=avg_distance,
        efficiency=efficiency,
        wiener_index=wiener,
    )


def _require_pairs(g: Graph, measure: str) -> None:
    if g.n < 2:
        raise DomainError(f"{measure} needs at least 2 vertices")


def average_distance(g: Graph, config: Optional[RobustnessConfig] = None) -> Number:
    _require_pairs(g, "average distance")
    return all_pairs_distances(g, config).avg_distance


def diameter(g: Graph, config: Optional[RobustnessConfig] = None) -> Number:
    _require_pairs(g, "diameter")
    return all_pairs_distances(g, config).diameter


def efficiency(g: Graph, config: Optional[RobustnessConfig] = None) -> Number:
    _require_pairs(g, "efficiency")
    return all_pairs_distances(g, config).efficiency


def normalize_mode(mode: str) -> str:
    resolved = BT_MODE_ALIASES.get(str(mode).strip().lower())
    if resolved is None:
        raise DomainError(f"unknown betweenness mode '{mode}' (expected exclude, full or half)")
    return resolved


def _accumulate_source(
    g: Graph,
    source: int,
    exact: bool,
    vertex_totals: List[Number],
    edge_totals: Dict[Edge, Number],
) -> None:
    sigma = [0] * g.n
    dist = [UNREACHABLE] * g.n
    preds: List[List[int]] = [[] for _ in range(g.n)]
    sigma[source] = 1
    dist[source] = 0
    order = []
    queue = deque([source])
    while queue:
        v = queue.popleft()
        order.append(v)
        for w in g.adjacency[v]:
            if dist[w] == UNREACHABLE:
                dist[w] = dist[v] + 1
                queue.append(w)
            if dist[w] == dist[v] + 1:
                sigma[w] += sigma[v]
                preds[w].append(v)

    zero: Number = Fraction(0) if exact else 0.0
    delta = [zero] * g.n
    for w in reversed(order):
        for v in preds[w]:
            share = _ratio(sigma[v], sigma[w], exact) * (1 + delta[w])
            edge = (v, w) if v < w else (w, v)
            edge_totals[edge] += share
            delta[v] += share
        if w != source:
            vertex_totals[w] += delta[w]


def betweenness(g: Graph, mode: str = BT_INCLUDE_FULL, config: Optional[RobustnessConfig] = None) -> BetweennessResult:
    config = build_config(config)
    mode = normalize_mode(mode)
    if g.n < 2:
        raise UndefinedMeasureError("betweenness needs at least 2 vertices")
    if not is_connected(g):
        raise UndefinedMeasureError("betweenness averages are undefined for disconnected graphs")

    exact = _exact(g, config)
    zero: Number = Fraction(0) if exact else 0.0
    vertex_totals: List[Number] = [zero] * g.n
    edge_totals: Dict[Edge, Number] = {edge: zero for edge in g.edges}

    # fixed source order keeps float sums reproducible
    for source in range(g.n):
        _accumulate_source(g, source, exact, vertex_totals, edge_totals)

    # every unordered pair was counted from both of its endpoints
    vertex_scores = [total / 2 for total in vertex_totals]
    edge_scores = {edge: total / 2 for edge, total in edge_totals.items()}

    if mode == BT_INCLUDE_FULL:
        vertex_scores = [score + (g.n - 1) for score in vertex_scores]
    elif mode == BT_INCLUDE_HALF:
        endpoint_credit = _ratio(g.n - 1, 2, exact)
        vertex_scores = [score + endpoint_credit for score in vertex_scores]

    return BetweennessResult(
        mode=mode,
        vertex_scores=vertex_scores,
        edge_scores=edge_scores,
        avg_vertex=sum(vertex_scores, zero) / g.n,
        avg_edge=sum(edge_scores.values(), zero) / g.m,
        max_edge=max(edge_scores.values()),
        max_vertex=max(vertex_scores),
    )


def _relation_holds(lhs: Number, rhs: Number) -> bool:
    if isinstance(lhs, Fraction) and isinstance(rhs, Fraction):
        return lhs == rhs
    scale = max(abs(float(lhs)), abs(float(rhs)), 1e-300)
    return abs(float(lhs) - float(rhs)) <= RELATION_TOLERANCE * scale


def check_betweenness_relations(g: Graph, config: Optional[RobustnessConfig] = None) -> BetweennessRelationReport:
    config = build_config(config)
    result = betweenness(g, BT_INCLUDE_FULL, config)
    d_bar = all_pairs_distances(g, config).avg_distance
    exact = _exact(g, config)

    expected_vertex = _ratio(g.n - 1, 2, exact) * (d_bar + 1)
    expected_edge = _ratio(g.n * (g.n - 1), 2 * g.m, exact) * d_bar

    return BetweennessRelationReport(
        n=g.n,
        m=g.m,
        avg_distance=d_bar,
        avg_vertex=result.avg_vertex,
        expected_avg_vertex=expected_vertex,
        avg_edge=result.avg_edge,
        expected_avg_edge=expected_edge,
        vertex_relation_holds=_relation_holds(result.avg_vertex, expected_vertex),
        edge_relation_holds=_relation_holds(result.avg_edge, expected_edge),
    )


def edges_among_neighbours(g: Graph, v: int) -> int:
    neighbourhood = set(g.adjacency[v])
    links = sum(len(neighbourhood.intersection(g.adjacency[u])) for u in neighbourhood)
    return links // 2


def clustering(g: Graph) -> ClusteringResult:
    local: List[Fraction] = []
    total = Fraction(0)
    for v in range(g.n):
        degree = g.degree(v)
        if degree <= 1:
            local.append(Fraction(0))
            continue
        coefficient = Fraction(2 * edges_among_neighbours(g, v), degree * (degree - 1))
        local.append(coefficient)
        total += coefficient
    return ClusteringResult(local=local, global_coefficient=total / g.n)

