"""All-terminal reliability: exact coefficients, evaluation and estimation.

Coefficients are kept in the removal basis used throughout the package:
``Rel(p) = sum_i F_i * q**i * p**(m - i)`` with ``q = 1 - p``, where ``F_i``
counts the sets of ``i`` removed edges that leave the graph connected.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .connectivity import count_min_edge_cuts, edge_connectivity, is_connected
from .errors import CapacityError, DomainError
from .graph_core import Graph, UnionFind, is_spanning_connected
from .robust_types import (
    FIRST_LESS_RELIABLE,
    MonteCarloEstimate,
    Number,
    RobustnessConfig,
    SECOND_LESS_RELIABLE,
    TIE_UNDETERMINED,
    build_config,
)
from .spectral import spanning_tree_count

logger = logging.getLogger(__name__)

STRATEGIES = ("auto", "enumeration", "contraction")
CONFIDENCE_Z = 1.96

Multigraph = Dict[int, Dict[int, int]]


@dataclass(frozen=True)
class ReliabilityPolynomial:
    coeffs: Tuple[int, ...]
    m: int

    def evaluate(self, p: Number) -> Number:
        """Homogeneous Horner evaluation; Fractions in give an exact Fraction out."""
        _check_probability(p)
        q = 1 - p
        power = 1
        result = 0
        for i in range(self.m, -1, -1):
            result = self.coeffs[i] * power + q * result
            power = power * p
        return result

    def power_basis(self) -> Tuple[int, ...]:
        """Integer coefficients a_0..a_m with Rel(p) = sum_j a_j p**j."""
        basis = [0] * (self.m + 1)
        for i, count in enumerate(self.coeffs):
            if not count:
                continue
            for t in range(i + 1):
                basis[self.m - i + t] += count * math.comb(i, t) * (-1) ** t
        return tuple(basis)

    @property
    def connected(self) -> bool:
        return self.coeffs[0] == 1


def _check_probability(p: Number) -> None:
    if not 0 <= p <= 1:
        raise DomainError(f"probability must lie in [0, 1], got {p}")


def _from_survivor_counts(survivors: Sequence[int], m: int) -> ReliabilityPolynomial:
    # survivors[k]: connected spanning subgraphs keeping exactly k edges
    padded = list(survivors) + [0] * (m + 1 - len(survivors))
    return ReliabilityPolynomial(coeffs=tuple(padded[m - i] for i in range(m + 1)), m=m)


def _enumerate_survivors(g: Graph) -> List[int]:
    counts = [0] * (g.m + 1)
    forest = UnionFind(g.n)
    edges = g.edges

    def visit(index: int, kept: int) -> None:
        remaining = g.m - index
        if forest.sets == 1:
            for extra in range(remaining + 1):
                counts[kept + extra] += math.comb(remaining, extra)
            return
        if forest.sets - 1 > remaining:
            return

        mark = forest.checkpoint()
        forest.union(*edges[index])
        visit(index + 1, kept + 1)
        forest.rollback(mark)
        visit(index + 1, kept)

    visit(0, 0)
    return counts


def _poly_add(a: List[int], b: List[int]) -> List[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for k, value in enumerate(b):
        out[k] += value
    return out


def _poly_mul(a: List[int], b: List[int]) -> List[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _multigraph(g: Graph) -> Multigraph:
    graph: Multigraph = {v: {} for v in range(g.n)}
    for u, v in g.edges:
        graph[u][v] = 1
        graph[v][u] = 1
    return graph


def _multigraph_connected(graph: Multigraph) -> bool:
    start = next(iter(graph))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in graph[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(graph)


def _contract(graph: Multigraph, u: int, v: int) -> Multigraph:
    """Merge u into v; the u-v bundle becomes loops and is dropped."""
    merged = {x: dict(nbrs) for x, nbrs in graph.items() if x != u}
    del merged[v][u]
    for w, k in graph[u].items():
        if w == v:
            continue
        del merged[w][u]
        merged[v][w] = merged[v].get(w, 0) + k
        merged[w][v] = merged[w].get(v, 0) + k
    return merged


def _delete_bundle(graph: Multigraph, u: int, v: int) -> Multigraph:
    reduced = {x: dict(nbrs) for x, nbrs in graph.items()}
    del reduced[u][v]
    del reduced[v][u]
    return reduced


def _bundle_survival(k: int) -> List[int]:
    # at least one of k parallel edges kept, by number kept
    return [0] + [math.comb(k, j) for j in range(1, k + 1)]


def _contract_survivors(g: Graph, node_budget: int) -> List[int]:
    total: List[int] = [0]
    work: List[Tuple[Multigraph, List[int]]] = [(_multigraph(g), [1])]
    nodes = 0
    while work:
        graph, factor = work.pop()
        nodes += 1
        if nodes > node_budget:
            raise CapacityError(
                f"deletion-contraction exceeded contraction_node_budget={node_budget}; use Monte Carlo (--mc) instead"
            )

        # pendant bundles never branch: deleting them disconnects
        while len(graph) > 1:
            u = min(graph, key=lambda x: (len(graph[x]), x))
            if len(graph[u]) != 1:
                break
            v, k = next(iter(graph[u].items()))
            factor = _poly_mul(factor, _bundle_survival(k))
            graph = _contract(graph, u, v)

        if len(graph) == 1:
            total = _poly_add(total, factor)
            continue
        if not _multigraph_connected(graph):
            continue

        u = min(graph, key=lambda x: (len(graph[x]), x))
        v = min(graph[u])
        k = graph[u][v]
        work.append((_delete_bundle(graph, u, v), factor))
        work.append((_contract(graph, u, v), _poly_mul(factor, _bundle_survival(k))))

    logger.debug("deletion-contraction visited %d nodes", nodes)
    return total


def reliability_coefficients(
    g: Graph,
    config: Optional[RobustnessConfig] = None,
    strategy: str = "auto",
) -> ReliabilityPolynomial:
    config = build_config(config)
    if strategy not in STRATEGIES:
        raise DomainError(f"unknown reliability strategy '{strategy}' (expected one of {', '.join(STRATEGIES)})")

    if g.n > 1 and not is_connected(g):
        return ReliabilityPolynomial(coeffs=(0,) * (g.m + 1), m=g.m)
    if strategy == "auto":
        strategy = "enumeration" if g.m <= config.enumeration_max_edges else "contraction"
    logger.debug("reliability coefficients n=%d m=%d strategy=%s", g.n, g.m, strategy)

    if strategy == "enumeration":
        if g.m > config.enumeration_max_edges:
            raise CapacityError(
                f"m={g.m} exceeds enumeration_max_edges={config.enumeration_max_edges}; use Monte Carlo (--mc) instead"
            )
        survivors = _enumerate_survivors(g)
    else:
        survivors = _contract_survivors(g, config.contraction_node_budget)
    return _from_survivor_counts(survivors, g.m)


def reliability_at(g: Graph, p: Number, config: Optional[RobustnessConfig] = None) -> Number:
    _check_probability(p)
    return reliability_coefficients(g, config).evaluate(p)


def _chunk_successes(g: Graph, p: float, seed: int, chunk: int, size: int) -> int:
    rng = np.random.default_rng(np.random.SeedSequence(seed % 2**64, spawn_key=(chunk,)))
    if g.m == 0:
        return size if g.n == 1 else 0
    kept = rng.random((size, g.m)) < p
    edges = g.edges
    successes = 0
    for row in kept:
        if is_spanning_connected(g.n, (edges[i] for i in np.flatnonzero(row))):
            successes += 1
    return successes


def reliability_monte_carlo(
    g: Graph,
    p: float,
    trials: int,
    seed: int,
    config: Optional[RobustnessConfig] = None,
) -> MonteCarloEstimate:
    """Estimate Rel(p) by sampling edge-survival patterns.

    Trials are split into chunks of ``monte_carlo_chunk_size``; chunk ``c``
    draws from a stream derived from ``(seed, c)``, so the estimate depends on
    the seed and trial count only, not on ``monte_carlo_workers``.
    """
    config = build_config(config)
    _check_probability(p)
    trials = int(trials)
    if trials < 1:
        raise DomainError(f"trials must be positive, got {trials}")

    chunk_size = max(1, int(config.monte_carlo_chunk_size))
    sizes = [min(chunk_size, trials - start) for start in range(0, trials, chunk_size)]
    workers = max(1, int(config.monte_carlo_workers))

    if workers == 1 or len(sizes) == 1:
        per_chunk = [_chunk_successes(g, p, seed, chunk, size) for chunk, size in enumerate(sizes)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            futures = [executor.submit(_chunk_successes, g, p, seed, chunk, size) for chunk, size in enumerate(sizes)]
            per_chunk = [future.result() for future in futures]

    successes = sum(per_chunk)
    estimate = successes / trials
    half_width = CONFIDENCE_Z * math.sqrt(estimate * (1.0 - estimate) / trials)
    logger.debug("monte carlo p=%s trials=%d chunks=%d successes=%d", p, trials, len(sizes), successes)
    return MonteCarloEstimate(
        estimate=estimate,
        half_width=half_width,
        trials=trials,
        successes=successes,
        p=float(p),
        seed=int(seed),
    )


def _require_connected(g1: Graph, g2: Graph) -> None:
    for label, g in (("first", g1), ("second", g2)):
        if g.n < 2 or not is_connected(g):
            raise DomainError(f"asymptotic reliability comparison needs connected graphs; {label} graph is not")


def _order(first: int, second: int) -> str:
    # smaller key means less reliable
    if first < second:
        return FIRST_LESS_RELIABLE
    if second < first:
        return SECOND_LESS_RELIABLE
    return TIE_UNDETERMINED


def compare_near_one(g1: Graph, g2: Graph, config: Optional[RobustnessConfig] = None) -> str:
    """Order two graphs by Rel as p -> 1.

    1 - Rel(p) behaves like s(G) * q**kappa_e, so the smaller edge
    connectivity loses; on equal kappa_e more minimum cuts loses.
    """
    _require_connected(g1, g2)
    verdict = _order(edge_connectivity(g1), edge_connectivity(g2))
    if verdict != TIE_UNDETERMINED:
        return verdict
    # more minimum cuts is worse, so compare negated counts
    return _order(-count_min_edge_cuts(g1, config), -count_min_edge_cuts(g2, config))


def compare_near_zero(g1: Graph, g2: Graph, config: Optional[RobustnessConfig] = None) -> str:
    """Order two graphs by Rel as p -> 0.

    The lowest-order term is xi(G) * p**(n - 1): more vertices loses outright,
    otherwise fewer spanning trees loses.
    """
    _require_connected(g1, g2)
    if g1.n != g2.n:
        return _order(-g1.n, -g2.n)
    return _order(spanning_tree_count(g1, config), spanning_tree_count(g2, config))


def _grid_points(grid: int) -> List[Fraction]:
    grid = int(grid)
    if grid < 1:
        raise DomainError(f"grid must be at least 1, got {grid}")
    return [Fraction(j, grid) for j in range(grid + 1)]


def sample_curve(poly: ReliabilityPolynomial, grid: int) -> pd.DataFrame:
    points = _grid_points(grid)
    return pd.DataFrame(
        {
            "p": [float(p) for p in points],
            "rel": [float(poly.evaluate(p)) for p in points],
        }
    )


def curve_csv(poly: ReliabilityPolynomial, grid: int) -> str:
    return sample_curve(poly, grid).to_csv(index=False, float_format="%.6f", lineterminator="\n")


def crossing_points(
    g1: Graph,
    g2: Graph,
    grid: int = 100,
    config: Optional[RobustnessConfig] = None,
) -> List[Tuple[float, float]]:
    """Grid intervals inside (0, 1) where Rel_g1 - Rel_g2 changes sign.

    A non-empty result means neither graph is more reliable for every p.
    """
    first = reliability_coefficients(g1, config)
    second = reliability_coefficients(g2, config)
    points = _grid_points(grid)[1:-1]

    crossings: List[Tuple[float, float]] = []
    last_sign = 0
    last_point: Optional[Fraction] = None
    for p in points:
        gap = first.evaluate(p) - second.evaluate(p)
        sign = (gap > 0) - (gap < 0)
        if sign == 0:
            continue
        if last_sign and sign != last_sign:
            crossings.append((float(last_point), float(p)))
        last_sign = sign
        last_point = p
    return crossings
