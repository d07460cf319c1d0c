from itertools import combinations
from unittest import TestCase

import networkx as nx

from robustnet.connectivity import (
    connectivity_report,
    count_min_edge_cuts,
    edge_connectivity,
    is_connected,
    local_edge_connectivity,
    local_vertex_connectivity,
    vertex_connectivity,
)
from robustnet.errors import CapacityError, DomainError
from robustnet.graph_core import Graph, GraphFamily, generate


def _family(kind, n=4):
    return generate(GraphFamily(kind, n))


def _networkx_cut_count(nx_graph):
    size = nx.edge_connectivity(nx_graph)
    count = 0
    for removed in combinations(list(nx_graph.edges()), size):
        rest = nx_graph.copy()
        rest.remove_edges_from(removed)
        if not nx.is_connected(rest):
            count += 1
    return count


class ConnectivityTest(TestCase):
    def test_four_vertex_families(self):
        expected = {
            "K": (3, 3),
            "C": (2, 2),
            "S": (1, 1),
            "P": (1, 1),
            "O": (0, 0),
        }
        for kind, (kappa_v, kappa_e) in expected.items():
            with self.subTest(kind=kind):
                g = _family(kind)
                self.assertEqual(vertex_connectivity(g), kappa_v)
                self.assertEqual(edge_connectivity(g), kappa_e)

    def test_complete_graph_convention(self):
        for n in range(2, 7):
            with self.subTest(n=n):
                self.assertEqual(vertex_connectivity(_family("K", n)), n - 1)

    def test_small_graphs_raise(self):
        single = Graph(1)
        with self.assertRaises(DomainError):
            edge_connectivity(single)
        with self.assertRaises(DomainError):
            vertex_connectivity(single)

    def test_local_connectivity(self):
        c6 = _family("C", 6)
        self.assertEqual(local_edge_connectivity(c6, 0, 3), 2)
        self.assertEqual(local_vertex_connectivity(c6, 0, 3), 2)
        with self.assertRaises(DomainError):
            local_vertex_connectivity(c6, 0, 1)

    def test_vertex_connectivity_below_edge_connectivity(self):
        # two triangles sharing vertex 2: a cut vertex, but no bridge
        bowtie = Graph(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])
        self.assertEqual(vertex_connectivity(bowtie), 1)
        self.assertEqual(edge_connectivity(bowtie), 2)

    def test_min_cut_counts(self):
        self.assertEqual(count_min_edge_cuts(_family("K")), 4)
        self.assertEqual(count_min_edge_cuts(_family("C")), 6)
        self.assertEqual(count_min_edge_cuts(_family("S")), 3)
        self.assertEqual(count_min_edge_cuts(_family("P")), 3)

    def test_min_cut_count_rejects_disconnected_graphs(self):
        with self.assertRaises(DomainError):
            count_min_edge_cuts(_family("O"))

    def test_min_cut_budget(self):
        with self.assertRaises(CapacityError):
            count_min_edge_cuts(_family("C", 8), config={"cut_enumeration_budget": 10})

    def test_report(self):
        report = connectivity_report(_family("C"), with_cut_count=True)
        self.assertTrue(report.connected)
        self.assertEqual((report.kappa_v, report.kappa_e, report.s_count), (2, 2, 6))

        empty = connectivity_report(_family("O"))
        self.assertFalse(empty.connected)
        self.assertEqual((empty.kappa_v, empty.kappa_e, empty.s_count), (0, 0, None))

    def test_is_connected(self):
        self.assertTrue(is_connected(Graph(1)))
        self.assertTrue(is_connected(_family("P", 5)))
        self.assertFalse(is_connected(Graph(3, [(0, 1)])))


class ConnectivityOracleTest(TestCase):
    """Every connected graph on at most six vertices, checked against networkx."""

    def test_matches_networkx_on_atlas(self):
        checked = 0
        for nx_graph in nx.graph_atlas_g():
            if not 2 <= nx_graph.number_of_nodes() <= 6 or not nx.is_connected(nx_graph):
                continue
            g = Graph.from_networkx(nx_graph)
            self.assertEqual(edge_connectivity(g), nx.edge_connectivity(nx_graph), g.edges)
            self.assertEqual(vertex_connectivity(g), nx.node_connectivity(nx_graph), g.edges)
            checked += 1
        self.assertGreater(checked, 100)

    def test_cut_counts_match_brute_force_on_atlas(self):
        for nx_graph in nx.graph_atlas_g():
            if not 2 <= nx_graph.number_of_nodes() <= 6 or not nx.is_connected(nx_graph):
                continue
            g = Graph.from_networkx(nx_graph)
            self.assertEqual(count_min_edge_cuts(g), _networkx_cut_count(nx_graph), g.edges)
