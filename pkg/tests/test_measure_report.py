import json
import math
from fractions import Fraction
from unittest import TestCase, mock

from robustnet.errors import CapacityError, DomainError, NumericError, UsageError
from robustnet.graph_core import Graph, GraphFamily, generate, with_edge
from robustnet.measure_report import (
    MEASURE_DIRECTIONS,
    MEASURE_KEYS,
    audit_edge_addition,
    build_measure_report,
    compare_graphs,
    format_real,
    render_comparison_table,
    render_report_json,
    render_report_table,
    report_cells,
    report_to_dict,
    resolve_measure,
    suggest_edges,
    verdict,
)


def _family(kind, n=4):
    return generate(GraphFamily(kind, n))


def _row(report):
    return tuple(getattr(report, key) for key in MEASURE_KEYS)


INF = math.inf


class MeasureReportTest(TestCase):
    def test_table_rows(self):
        k4 = build_measure_report(_family("K"), bt_mode="full")
        self.assertEqual(_row(k4)[:10], (1, 3, 3, 1, 1, 1, 1, 3, 1, 1))
        self.assertAlmostEqual(k4.algebraic_connectivity, 4.0, delta=1e-9)
        self.assertEqual(k4.spanning_trees, 16)
        self.assertAlmostEqual(k4.effective_resistance, 3.0, delta=1e-9)

        c4 = build_measure_report(_family("C"), bt_mode="half")
        self.assertEqual(
            _row(c4)[:10],
            (1, 2, 2, 2, Fraction(4, 3), Fraction(5, 6), 2, 2, 2, 0),
        )
        self.assertEqual(c4.spanning_trees, 4)
        self.assertAlmostEqual(c4.effective_resistance, 5.0, delta=1e-9)

        s4 = build_measure_report(_family("S"), bt_mode="half")
        self.assertEqual(
            _row(s4)[:10],
            (1, 1, 1, 2, Fraction(3, 2), Fraction(3, 4), 3, Fraction(9, 4), 3, 0),
        )
        self.assertAlmostEqual(s4.algebraic_connectivity, 1.0, delta=1e-9)
        self.assertAlmostEqual(s4.effective_resistance, 9.0, delta=1e-9)

        p4 = build_measure_report(_family("P"), bt_mode="half")
        self.assertEqual(
            _row(p4)[:10],
            (1, 1, 1, 3, Fraction(5, 3), Fraction(13, 18), 4, Fraction(5, 2), Fraction(10, 3), 0),
        )
        self.assertAlmostEqual(p4.algebraic_connectivity, 0.59, delta=0.005)
        self.assertEqual(p4.spanning_trees, 1)
        self.assertAlmostEqual(p4.effective_resistance, 10.0, delta=1e-9)

    def test_disconnected_row(self):
        o4 = build_measure_report(_family("O"))
        self.assertEqual(
            _row(o4),
            (0, 0, 0, INF, INF, 0, None, None, None, 0, 0.0, 0, INF),
        )
        self.assertEqual(o4.unavailable, {})
        self.assertEqual(o4.reliability, {"rel@0.9": 0.0, "rel@0.99": 0.0})

    def test_vertex_betweenness_mode_discrepancy(self):
        # endpoint credit shifts every vertex score by the same constant
        c4 = _family("C")
        self.assertEqual(build_measure_report(c4, bt_mode="half").avg_vertex_betweenness, 2)
        self.assertEqual(build_measure_report(c4, bt_mode="full").avg_vertex_betweenness, Fraction(7, 2))
        k4 = _family("K")
        self.assertEqual(build_measure_report(k4, bt_mode="full").avg_vertex_betweenness, 3)
        self.assertEqual(build_measure_report(k4, bt_mode="half").avg_vertex_betweenness, Fraction(3, 2))

    def test_reliability_at_conventional_probabilities(self):
        report = build_measure_report(_family("P"))
        self.assertAlmostEqual(report.reliability["rel@0.9"], 0.729, places=12)
        self.assertAlmostEqual(report.reliability["rel@0.99"], 0.99 ** 3, places=12)

        custom = build_measure_report(_family("P"), config={"report_probabilities": [0.5]})
        self.assertEqual(list(custom.reliability), ["rel@0.5"])

    def test_capacity_failures_do_not_abort_the_report(self):
        report = build_measure_report(_family("C", 6), config={"max_dense_n": 3, "enumeration_max_edges": 2, "contraction_node_budget": 1})
        self.assertIsNone(report.algebraic_connectivity)
        self.assertIsNone(report.spanning_trees)
        self.assertIsNone(report.effective_resistance)
        self.assertIn("algebraic_connectivity", report.unavailable)
        self.assertIn("rel@0.9", report.unavailable)
        self.assertEqual(report.kappa_e, 2)
        self.assertTrue(any(w.startswith("spanning_trees:") for w in report.warnings))
        table = render_report_table(report)
        self.assertIn("n/a(", table)

    def test_numeric_failure_recorded_as_unavailable(self):
        with mock.patch("robustnet.measure_report.effective_graph_resistance", side_effect=NumericError("identity check failed")):
            report = build_measure_report(_family("K"))
        self.assertIsNone(report.effective_resistance)
        self.assertEqual(report.unavailable["effective_resistance"], "identity check failed")

    def test_failed_reliability_search_runs_once_per_report(self):
        failure = CapacityError("deletion-contraction exceeded contraction_node_budget=1")
        with mock.patch("robustnet.measure_report.reliability_coefficients", side_effect=failure) as search:
            report = build_measure_report(_family("C", 6))
        self.assertEqual(search.call_count, 1)
        self.assertIn("rel@0.9", report.unavailable)
        self.assertIn("rel@0.99", report.unavailable)
        self.assertEqual(report.unavailable["rel@0.9"], report.unavailable["rel@0.99"])

    def test_failed_search_runs_once_per_graph_in_compare(self):
        failure = CapacityError("deletion-contraction exceeded contraction_node_budget=1")
        with mock.patch("robustnet.measure_report.reliability_coefficients", side_effect=failure) as search:
            compare_graphs(_family("C", 6), _family("P", 6))
        self.assertEqual(search.call_count, 2)


class RenderTest(TestCase):
    def test_json_keys_and_conventions(self):
        payload = json.loads(render_report_json(build_measure_report(_family("O"), name="o4")))
        for key in MEASURE_KEYS + ("n", "m", "bt_mode"):
            self.assertIn(key, payload)
        self.assertEqual(payload["diameter"], "inf")
        self.assertEqual(payload["effective_resistance"], "inf")
        self.assertIsNone(payload["max_edge_betweenness"])
        self.assertEqual(payload["spanning_trees"], 0)
        self.assertEqual(payload["name"], "o4")

    def test_exact_rationals_in_json(self):
        payload = report_to_dict(build_measure_report(_family("P"), bt_mode="half"))
        self.assertEqual(payload["exact"]["efficiency"], "13/18")
        self.assertAlmostEqual(payload["efficiency"], 13 / 18, places=15)
        self.assertEqual(payload["avg_vertex_betweenness"], 2.5)
        self.assertEqual(payload["bt_mode"], "include-half")

    def test_table_and_json_carry_the_same_values(self):
        for kind in ("K", "C", "S", "P", "O"):
            with self.subTest(kind=kind):
                report = build_measure_report(_family(kind), bt_mode="half")
                payload = report_to_dict(report)
                cells = {row["measure"]: row["value"] for row in report_cells(report)}
                for key in MEASURE_KEYS:
                    value = payload[key]
                    if value is None:
                        self.assertTrue(cells[key] == "-" or cells[key].startswith("n/a"))
                    elif value == "inf":
                        self.assertEqual(cells[key], "inf")
                    else:
                        self.assertIn(format_real(float(value)), cells[key])

    def test_table_shows_fractions_and_mode(self):
        table = render_report_table(build_measure_report(_family("S"), name="s4", bt_mode="half"))
        self.assertIn("s4: n=4 m=3", table)
        self.assertIn("9/4 (2.25) [include-half]", table)
        self.assertIn("rel@0.9 (conventional p)", table)

    def test_undefined_betweenness_has_no_mode_suffix(self):
        report = build_measure_report(_family("O"), bt_mode="half")
        cells = {row["measure"]: row["value"] for row in report_cells(report)}
        self.assertEqual(cells["avg_vertex_betweenness"], "-")
        self.assertEqual(cells["avg_edge_betweenness"], "-")
        self.assertEqual(cells["max_edge_betweenness"], "-")
        self.assertNotIn("- [include-half]", render_report_table(report))


class CompareTest(TestCase):
    def _verdicts(self, payload):
        return {row["measure"]: row["more_robust"] for row in payload["rows"]}

    def test_cycle_beats_star(self):
        payload = compare_graphs(_family("C"), _family("S"), names=("c4", "s4"), bt_mode="half")
        verdicts = self._verdicts(payload)
        for key in ("kappa_v", "kappa_e", "avg_distance", "efficiency", "max_edge_betweenness",
                    "avg_vertex_betweenness", "avg_edge_betweenness", "algebraic_connectivity",
                    "spanning_trees", "effective_resistance", "rel@0.9"):
            self.assertEqual(verdicts[key], "first", key)
        self.assertEqual(verdicts["connected"], "tie")
        self.assertEqual(verdicts["clustering"], "tie")
        self.assertEqual(verdicts["diameter"], "tie")
        self.assertEqual(payload["near_one"]["more_robust"], "first")
        self.assertEqual(payload["near_zero"]["more_robust"], "first")

    def test_star_against_path(self):
        verdicts_payload = compare_graphs(_family("S"), _family("P"))
        verdicts = self._verdicts(verdicts_payload)
        for key in ("connected", "kappa_v", "kappa_e", "spanning_trees", "rel@0.9"):
            self.assertEqual(verdicts[key], "tie", key)
        for key in ("avg_distance", "efficiency", "effective_resistance"):
            self.assertEqual(verdicts[key], "first", key)
        self.assertEqual(verdicts_payload["near_one"]["more_robust"], "tie")
        self.assertEqual(verdicts_payload["near_zero"]["more_robust"], "tie")

    def test_graph_against_itself_ties_everywhere(self):
        for kind in ("K", "P", "O"):
            with self.subTest(kind=kind):
                payload = compare_graphs(_family(kind), _family(kind))
                self.assertEqual(set(self._verdicts(payload).values()), {"tie"})

    def test_disconnected_graphs_skip_asymptotic_orderings(self):
        payload = compare_graphs(_family("O"), _family("K"))
        self.assertEqual(payload["near_one"]["more_robust"], "n/a")
        self.assertEqual(self._verdicts(payload)["max_edge_betweenness"], "n/a")
        self.assertIn("reliability p->1", render_comparison_table(payload))

    def test_verdict_directions(self):
        self.assertEqual(verdict("effective_resistance", 3.0, 5.0), "first")
        self.assertEqual(verdict("spanning_trees", 3, 5), "second")
        self.assertEqual(verdict("diameter", INF, 2), "second")
        self.assertEqual(verdict("diameter", INF, INF), "tie")
        self.assertEqual(verdict("algebraic_connectivity", 2.0, 2.0 + 1e-13), "tie")
        self.assertEqual(verdict("avg_distance", None, Fraction(3, 2)), "n/a")
        self.assertEqual(set(MEASURE_DIRECTIONS.values()), {"higher", "lower"})


class SuggestEdgeTest(TestCase):
    def test_path_resistance_prefers_closing_the_cycle(self):
        suggestions = suggest_edges(_family("P"), "R")
        self.assertEqual([s.edge for s in suggestions], [(0, 3), (0, 2), (1, 3)])
        best = suggestions[0]
        self.assertEqual(best.rank, 1)
        self.assertAlmostEqual(best.before, 10.0, delta=1e-9)
        self.assertAlmostEqual(best.after, 5.0, delta=1e-9)
        self.assertAlmostEqual(best.improvement, 5.0, delta=1e-9)
        self.assertAlmostEqual(best.deltas["spanning_trees"], 3.0)
        self.assertAlmostEqual(suggestions[1].improvement, suggestions[2].improvement, delta=1e-9)

    def test_complete_graph_has_nothing_to_add(self):
        self.assertEqual(suggest_edges(_family("K"), "R"), [])

    def test_max_edge_betweenness_can_get_worse(self):
        g = Graph(6, [(0, 1), (1, 2), (1, 3), (2, 4), (3, 4), (4, 5)])
        suggestions = suggest_edges(g, "be_max")
        chord = next(s for s in suggestions if s.edge == (0, 2))
        self.assertEqual(chord.before, 5)
        self.assertEqual(chord.after, Fraction(11, 2))
        self.assertEqual(chord.improvement, -0.5)

    def test_top_limits_output(self):
        self.assertEqual(len(suggest_edges(_family("P", 5), "avg_distance", top=2)), 2)

    def test_reliability_measure(self):
        suggestions = suggest_edges(_family("P"), "relpoly@0.9", top=1)
        self.assertEqual(suggestions[0].measure, "rel@0.9")
        self.assertEqual(suggestions[0].edge, (0, 3))

    def test_unknown_measure_and_disconnected_input(self):
        with self.assertRaises(UsageError):
            suggest_edges(_family("P"), "robustness")
        with self.assertRaises(UsageError):
            resolve_measure("rel@1.5")
        with self.assertRaises(DomainError):
            suggest_edges(_family("O"), "R")

    def test_capacity_errors_propagate(self):
        with self.assertRaises(CapacityError):
            suggest_edges(_family("P", 6), "xi", config={"max_dense_n": 3})


class CriteriaAuditTest(TestCase):
    def test_strictly_increasing_measures_on_a_path(self):
        audit = audit_edge_addition(_family("P", 5))
        rows = {row.measure: row for row in audit.rows}
        self.assertEqual(audit.candidates, 6)
        for key in ("avg_distance", "efficiency", "spanning_trees", "effective_resistance", "rel@0.9", "rel@0.99"):
            self.assertTrue(rows[key].strictly_increasing, key)
        self.assertFalse(rows["connected"].strictly_increasing)
        self.assertEqual(rows["connected"].tied, 6)
        for row in audit.rows:
            if row.measure != "max_edge_betweenness":
                self.assertEqual(row.worsened, 0, row.measure)

    def test_bottleneck_graph_reports_a_worsening(self):
        g = Graph(6, [(0, 1), (1, 2), (1, 3), (2, 4), (3, 4), (4, 5)])
        rows = {row.measure: row for row in audit_edge_addition(g).rows}
        self.assertGreaterEqual(rows["max_edge_betweenness"].worsened, 1)
        self.assertFalse(rows["max_edge_betweenness"].strictly_increasing)

    def test_complete_graph(self):
        audit = audit_edge_addition(_family("K"))
        self.assertEqual(audit.candidates, 0)
        self.assertTrue(all(not row.strictly_increasing for row in audit.rows))

    def test_edge_addition_is_monotone_for_added_chords(self):
        g = _family("C", 6)
        before = build_measure_report(g)
        after = build_measure_report(with_edge(g, 0, 3))
        self.assertLess(after.avg_distance, before.avg_distance)
        self.assertGreater(after.spanning_trees, before.spanning_trees)
