import logging
import math
from collections import deque
from itertools import combinations
from typing import Dict, Optional

from .errors import CapacityError, DomainError
from .graph_core import Graph, components, is_spanning_connected, min_degree
from .robust_types import ConnectivityReport, RobustnessConfig, build_config

logger = logging.getLogger(__name__)

Residual = Dict[int, Dict[int, int]]


def is_connected(g: Graph) -> bool:
    return len(components(g)) == 1


def _add_arc(residual: Residual, u: int, v: int, capacity: int) -> None:
    residual.setdefault(u, {})
    residual.setdefault(v, {})
    residual[u][v] = residual[u].get(v, 0) + capacity
    residual[v].setdefault(u, 0)


def _max_flow(residual: Residual, source: int, sink: int, cutoff: Optional[int] = None) -> int:
    """Shortest augmenting paths; stops early once `cutoff` units are routed."""
    flow = 0
    while cutoff is None or flow < cutoff:
        parent = {source: source}
        queue = deque([source])
        while queue and sink not in parent:
            u = queue.popleft()
            for v, capacity in residual[u].items():
                if capacity > 0 and v not in parent:
                    parent[v] = u
                    queue.append(v)
        if sink not in parent:
            break

        bottleneck = None
        v = sink
        while v != source:
            u = parent[v]
            bottleneck = residual[u][v] if bottleneck is None else min(bottleneck, residual[u][v])
            v = u
        v = sink
        while v != source:
            u = parent[v]
            residual[u][v] -= bottleneck
            residual[v][u] += bottleneck
            v = u
        flow += bottleneck
    return flow


def _edge_network(g: Graph) -> Residual:
    residual: Residual = {v: {} for v in range(g.n)}
    for u, v in g.edges:
        _add_arc(residual, u, v, 1)
        _add_arc(residual, v, u, 1)
    return residual


def _split_network(g: Graph) -> Residual:
    # vertex v becomes 2v (in) -> 2v+1 (out) with unit capacity
    residual: Residual = {}
    for v in range(g.n):
        _add_arc(residual, 2 * v, 2 * v + 1, 1)
    for u, v in g.edges:
        _add_arc(residual, 2 * u + 1, 2 * v, g.n)
        _add_arc(residual, 2 * v + 1, 2 * u, g.n)
    return residual


def local_edge_connectivity(g: Graph, s: int, t: int, cutoff: Optional[int] = None) -> int:
    return _max_flow(_edge_network(g), s, t, cutoff)


def local_vertex_connectivity(g: Graph, a: int, b: int, cutoff: Optional[int] = None) -> int:
    if g.has_edge(a, b):
        raise DomainError(f"local vertex connectivity needs non-adjacent vertices, got ({a}, {b})")
    return _max_flow(_split_network(g), 2 * a + 1, 2 * b, cutoff)


def edge_connectivity(g: Graph) -> int:
    if g.n < 2:
        raise DomainError("edge connectivity needs at least 2 vertices")
    if not is_connected(g):
        return 0

    best = min_degree(g)
    source = 0
    for target in range(1, g.n):
        if best == 0:
            break
        best = min(best, local_edge_connectivity(g, source, target, cutoff=best))
    return best


def vertex_connectivity(g: Graph) -> int:
    if g.n < 2:
        raise DomainError("vertex connectivity needs at least 2 vertices")
    if g.is_complete():
        return g.n - 1
    if not is_connected(g):
        return 0

    degrees = [g.degree(v) for v in range(g.n)]
    best = min(degrees)
    anchor = degrees.index(best)
    neighbours = g.neighbors(anchor)

    for target in range(g.n):
        if best == 0:
            return 0
        if target == anchor or g.has_edge(anchor, target):
            continue
        best = min(best, local_vertex_connectivity(g, anchor, target, cutoff=best))

    for x, y in combinations(neighbours, 2):
        if g.has_edge(x, y):
            continue
        best = min(best, local_vertex_connectivity(g, x, y, cutoff=best))
    return best


def count_min_edge_cuts(g: Graph, config: Optional[RobustnessConfig] = None) -> int:
    config = build_config(config)
    if g.n < 2:
        raise DomainError("disconnecting sets need at least 2 vertices")
    if not is_connected(g):
        raise DomainError("s(G) is defined for connected graphs only")

    size = edge_connectivity(g)
    candidates = math.comb(g.m, size)
    if candidates > config.cut_enumeration_budget:
        raise CapacityError(
            f"C({g.m}, {size}) = {candidates} edge subsets exceeds cut_enumeration_budget={config.cut_enumeration_budget}"
        )
    logger.debug("enumerating %d edge subsets of size %d", candidates, size)

    edges = list(g.edges)
    count = 0
    for removed in combinations(range(g.m), size):
        dropped = set(removed)
        if not is_spanning_connected(g.n, (edges[i] for i in range(g.m) if i not in dropped)):
            count += 1
    return count


def connectivity_report(g: Graph, with_cut_count: bool = False, config: Optional[RobustnessConfig] = None) -> ConnectivityReport:
    connected = is_connected(g)
    if g.n < 2 or not connected:
        return ConnectivityReport(connected=connected, kappa_v=0, kappa_e=0)

    report = ConnectivityReport(
        connected=True,
        kappa_v=vertex_connectivity(g),
        kappa_e=edge_connectivity(g),
    )
    if with_cut_count:
        report.s_count = count_min_edge_cuts(g, config)
    return report

