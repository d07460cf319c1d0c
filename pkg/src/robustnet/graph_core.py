"""Immutable simple undirected graphs, the edge-list format and named generators."""

import io
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, TextIO, Tuple, Union

import networkx as nx
import numpy as np

from .errors import DomainError, GraphParseError, InvalidEdgeError, InvalidFamilyError, SelfLoopError, VertexRangeError
from .robust_types import Edge

logger = logging.getLogger(__name__)


def _normalize_edge(u: int, v: int, n: int, line: Optional[int] = None) -> Edge:
    if u == v:
        parse_error, message = SelfLoopError, f"self-loop on vertex {u}"
    elif not (0 <= u < n and 0 <= v < n):
        vertex = v if 0 <= u < n else u
        parse_error, message = VertexRangeError, f"vertex {vertex} out of range [0, {n})"
    else:
        return (u, v) if u < v else (v, u)

    # only edge-list text has a line number
    if line is None:
        raise InvalidEdgeError(message)
    raise parse_error(message, line=line)


class Graph:
    """Simple undirected unweighted graph on vertices 0..n-1.

    Instances never change after construction; `with_edge` / `without_edge`
    return new graphs.
    """

    __slots__ = ("_n", "_edges", "_adjacency")

    def __init__(self, n: int, edges: Iterable[Tuple[int, int]] = ()):
        n = int(n)
        if n < 1:
            raise DomainError(f"vertex count must be positive, got {n}")
        normalized = {_normalize_edge(int(u), int(v), n) for u, v in edges}

        neighbours: List[List[int]] = [[] for _ in range(n)]
        for u, v in normalized:
            neighbours[u].append(v)
            neighbours[v].append(u)

        self._n = n
        self._edges = tuple(sorted(normalized))
        self._adjacency = tuple(tuple(sorted(row)) for row in neighbours)

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return len(self._edges)

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return self._edges

    @property
    def adjacency(self) -> Tuple[Tuple[int, ...], ...]:
        return self._adjacency

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self._adjacency[v]

    def degree(self, v: int) -> int:
        return len(self._adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        if u == v or not (0 <= u < self._n and 0 <= v < self._n):
            return False
        a, b = (u, v) if u < v else (v, u)
        return b in self._adjacency[a]

    def is_complete(self) -> bool:
        return self.m == self._n * (self._n - 1) // 2

    def adjacency_matrix(self) -> np.ndarray:
        matrix = np.zeros((self._n, self._n), dtype=np.int64)
        for u, v in self._edges:
            matrix[u, v] = 1
            matrix[v, u] = 1
        return matrix

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self._n))
        graph.add_edges_from(self._edges)
        return graph

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> "Graph":
        if graph.is_directed() or graph.is_multigraph():
            raise DomainError("only simple undirected networkx graphs are supported")
        try:
            order = sorted(graph.nodes())
        except TypeError:
            order = list(graph.nodes())
        if not order:
            raise DomainError("networkx graph has no vertices")
        index: Dict[Any, int] = {node: idx for idx, node in enumerate(order)}
        return cls(len(order), ((index[u], index[v]) for u, v in graph.edges() if u != v))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._n, self._edges))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self.m})"


FAMILY_KINDS = {
    "K": "K",
    "complete": "K",
    "C": "C",
    "cycle": "C",
    "S": "S",
    "star": "S",
    "P": "P",
    "path": "P",
    "O": "O",
    "empty": "O",
}


@dataclass(frozen=True)
class GraphFamily:
    kind: str
    order: int

    def validated(self) -> "GraphFamily":
        kind = FAMILY_KINDS.get(str(self.kind).strip()) or FAMILY_KINDS.get(str(self.kind).strip().lower())
        if kind is None:
            raise InvalidFamilyError(f"unknown graph family '{self.kind}' (expected one of K, C, S, P, O)")
        order = int(self.order)
        if order < 1:
            raise InvalidFamilyError(f"family order must be at least 1, got {order}")
        if kind == "C" and order < 3:
            raise InvalidFamilyError(f"cycle requires n >= 3, got {order}")
        return GraphFamily(kind, order)


def generate(family: GraphFamily) -> Graph:
    family = family.validated()
    n = family.order
    if family.kind == "K":
        edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    elif family.kind == "C":
        edges = [(i, (i + 1) % n) for i in range(n)]
    elif family.kind == "S":
        edges = [(0, leaf) for leaf in range(1, n)]
    elif family.kind == "P":
        edges = [(i, i + 1) for i in range(n - 1)]
    else:
        edges = []
    return Graph(n, edges)


def _content_lines(text: Union[str, TextIO]):
    stream = io.StringIO(text) if isinstance(text, str) else text
    for line_number, raw in enumerate(stream, start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield line_number, stripped


def _parse_int(token: str, line_number: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphParseError(f"malformed token '{token}'", line=line_number) from None


def parse_edge_list(text: Union[str, TextIO]) -> Graph:
    n: Optional[int] = None
    edges = set()
    for line_number, content in _content_lines(text):
        tokens = content.split()
        if n is None:
            if len(tokens) != 1:
                raise GraphParseError("expected a single vertex count", line=line_number)
            n = _parse_int(tokens[0], line_number)
            if n < 1:
                raise GraphParseError(f"vertex count must be positive, got {n}", line=line_number)
            continue

        if len(tokens) != 2:
            raise GraphParseError(f"expected 'u v', got '{content}'", line=line_number)
        u = _parse_int(tokens[0], line_number)
        v = _parse_int(tokens[1], line_number)
        edges.add(_normalize_edge(u, v, n, line=line_number))

    if n is None:
        raise GraphParseError("missing vertex count")
    logger.debug("parsed edge list: n=%d m=%d", n, len(edges))
    return Graph(n, edges)


def serialize_edge_list(g: Graph) -> str:
    lines = [str(g.n)]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def read_edge_list(path: Union[str, Path]) -> Graph:
    with open(path, "r") as file_obj:
        return parse_edge_list(file_obj)


def write_edge_list(g: Graph, path: Union[str, Path]) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(serialize_edge_list(g))
    return target


def with_edge(g: Graph, u: int, v: int) -> Graph:
    edge = _normalize_edge(int(u), int(v), g.n)
    if g.has_edge(*edge):
        return g
    return Graph(g.n, g.edges + (edge,))


def without_edge(g: Graph, u: int, v: int) -> Graph:
    edge = _normalize_edge(int(u), int(v), g.n)
    if not g.has_edge(*edge):
        return g
    return Graph(g.n, (e for e in g.edges if e != edge))


def degrees(g: Graph) -> List[int]:
    return [len(row) for row in g.adjacency]


def min_degree(g: Graph) -> int:
    return min(degrees(g))


def max_degree(g: Graph) -> int:
    return max(degrees(g))


def complement_nonedges(g: Graph) -> List[Edge]:
    return [(u, v) for u in range(g.n) for v in range(u + 1, g.n) if not g.has_edge(u, v)]


def components(g: Graph) -> List[List[int]]:
    seen = [False] * g.n
    result: List[List[int]] = []
    for start in range(g.n):
        if seen[start]:
            continue
        seen[start] = True
        stack = [start]
        members = []
        while stack:
            v = stack.pop()
            members.append(v)
            for w in g.adjacency[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        result.append(sorted(members))
    return result


def component_count(g: Graph) -> int:
    return len(components(g))


class UnionFind:
    """Disjoint sets over 0..n-1 with union by size and undo.

    No path compression, so `rollback` can restore any earlier state.
    """

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.sets = n
        self._history: List[Optional[Tuple[int, int]]] = []

    def find(self, v: int) -> int:
        while self.parent[v] != v:
            v = self.parent[v]
        return v

    def union(self, u: int, v: int) -> bool:
        root_u = self.find(u)
        root_v = self.find(v)
        if root_u == root_v:
            self._history.append(None)
            return False
        if self.size[root_u] < self.size[root_v]:
            root_u, root_v = root_v, root_u
        self.parent[root_v] = root_u
        self.size[root_u] += self.size[root_v]
        self.sets -= 1
        self._history.append((root_u, root_v))
        return True

    def checkpoint(self) -> int:
        return len(self._history)

    def rollback(self, checkpoint: int) -> None:
        while len(self._history) > checkpoint:
            merged = self._history.pop()
            if merged is None:
                continue
            root_u, root_v = merged
            self.parent[root_v] = root_v
            self.size[root_u] -= self.size[root_v]
            self.sets += 1


def is_spanning_connected(n: int, edges: Iterable[Edge]) -> bool:
    forest = UnionFind(n)
    for u, v in edges:
        forest.union(u, v)
        if forest.sets == 1:
            return True
    return forest.sets == 1
