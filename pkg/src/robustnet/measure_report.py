"""Measure reports, two-graph comparisons and the edge-addition advisor.

Everything here is assembled from the library modules; the renderers turn the
results into the table/JSON text printed by the CLI.
"""

import json
import logging
import math
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

import pandas as pd

from .classical_metrics import all_pairs_distances, betweenness, clustering, normalize_mode
from .connectivity import connectivity_report, is_connected
from .errors import CapacityError, DomainError, NumericError, RobustnetError, UsageError
from .graph_core import Graph, complement_nonedges, with_edge
from .reliability import compare_near_one, compare_near_zero, reliability_coefficients
from .robust_types import (
    BT_INCLUDE_FULL,
    FIRST_LESS_RELIABLE,
    CriteriaAudit,
    EdgeSuggestion,
    MeasureCriteria,
    MeasureReport,
    Number,
    RobustnessConfig,
    SECOND_LESS_RELIABLE,
    build_config,
)
from .spectral import effective_graph_resistance, spanning_tree_count, spectrum

logger = logging.getLogger(__name__)

MEASURE_KEYS = (
    "connected",
    "kappa_v",
    "kappa_e",
    "diameter",
    "avg_distance",
    "efficiency",
    "max_edge_betweenness",
    "avg_vertex_betweenness",
    "avg_edge_betweenness",
    "clustering",
    "algebraic_connectivity",
    "spanning_trees",
    "effective_resistance",
)

HIGHER = "higher"
LOWER = "lower"

# Robustness direction of every measure: which way is "more robust".
MEASURE_DIRECTIONS: Dict[str, str] = {
    "connected": HIGHER,
    "kappa_v": HIGHER,
    "kappa_e": HIGHER,
    "diameter": LOWER,
    "avg_distance": LOWER,
    "efficiency": HIGHER,
    "max_edge_betweenness": LOWER,
    "avg_vertex_betweenness": LOWER,
    "avg_edge_betweenness": LOWER,
    "clustering": HIGHER,
    "algebraic_connectivity": HIGHER,
    "spanning_trees": HIGHER,
    "effective_resistance": LOWER,
    "reliability": HIGHER,
}

MEASURE_ALIASES = {
    "kappa": "connected",
    "d_max": "diameter",
    "d_avg": "avg_distance",
    "E": "efficiency",
    "be_max": "max_edge_betweenness",
    "bv_avg": "avg_vertex_betweenness",
    "be_avg": "avg_edge_betweenness",
    "C": "clustering",
    "lambda2": "algebraic_connectivity",
    "xi": "spanning_trees",
    "R": "effective_resistance",
}

RELIABILITY_PREFIXES = ("rel@", "relpoly@")

VERDICT_FIRST = "first"
VERDICT_SECOND = "second"
VERDICT_TIE = "tie"
VERDICT_NA = "n/a"

SOFT_ERRORS = (CapacityError, NumericError)


def reliability_key(p: float) -> str:
    return f"rel@{p:g}"


def resolve_measure(name: str) -> Tuple[str, Optional[float]]:
    """Map a CLI measure name to (key, p); p is set only for reliability."""
    raw = str(name).strip()
    lowered = raw.lower()
    for prefix in RELIABILITY_PREFIXES:
        if lowered.startswith(prefix):
            try:
                p = float(raw[len(prefix):])
            except ValueError:
                raise UsageError(f"malformed reliability measure '{name}' (expected rel@P)") from None
            if not 0.0 <= p <= 1.0:
                raise UsageError(f"reliability probability must lie in [0, 1], got {p}")
            return reliability_key(p), p

    key = MEASURE_ALIASES.get(raw, raw)
    if key not in MEASURE_KEYS:
        choices = ", ".join(MEASURE_KEYS + ("rel@P",))
        raise UsageError(f"unknown measure '{name}' (expected one of {choices})")
    return key, None


def measure_direction(key: str) -> str:
    if key.startswith("rel@"):
        return MEASURE_DIRECTIONS["reliability"]
    return MEASURE_DIRECTIONS[key]


class MeasureEvaluator:
    """Lazily computes measures of one graph, sharing intermediate results."""

    def __init__(self, g: Graph, config: Optional[RobustnessConfig] = None, bt_mode: str = BT_INCLUDE_FULL):
        self.g = g
        self.config = build_config(config)
        self.bt_mode = normalize_mode(bt_mode)
        self._cache: Dict[str, Any] = {}
        self._failures: Dict[str, RobustnetError] = {}

    def _cached(self, name: str, builder: Callable[[], Any]) -> Any:
        # a failed build is replayed, not retried
        if name in self._failures:
            raise self._failures[name]
        if name not in self._cache:
            try:
                self._cache[name] = builder()
            except RobustnetError as exc:
                self._failures[name] = exc
                raise
        return self._cache[name]

    def _connectivity(self):
        return self._cached("connectivity", lambda: connectivity_report(self.g, config=self.config))

    def _distances(self):
        return self._cached("distances", lambda: all_pairs_distances(self.g, self.config))

    def _betweenness(self):
        return self._cached("betweenness", lambda: betweenness(self.g, self.bt_mode, self.config))

    def _algebraic_connectivity(self) -> float:
        if self.g.n < 2:
            raise DomainError("algebraic connectivity needs at least 2 vertices")
        return self._cached("spectrum", lambda: spectrum(self.g, self.config)).algebraic_connectivity

    def _reliability(self):
        return self._cached("reliability", lambda: reliability_coefficients(self.g, self.config))

    def value(self, key: str) -> Optional[Number]:
        if key.startswith("rel@"):
            return float(self._reliability().evaluate(float(key[len("rel@"):])))
        if key == "connected":
            return int(self._connectivity().connected)
        if key == "kappa_v":
            return self._connectivity().kappa_v
        if key == "kappa_e":
            return self._connectivity().kappa_e
        if key == "diameter":
            return self._distances().diameter
        if key == "avg_distance":
            return self._distances().avg_distance
        if key == "efficiency":
            return self._distances().efficiency
        if key == "max_edge_betweenness":
            return self._betweenness().max_edge
        if key == "avg_vertex_betweenness":
            return self._betweenness().avg_vertex
        if key == "avg_edge_betweenness":
            return self._betweenness().avg_edge
        if key == "clustering":
            return self._cached("clustering", lambda: clustering(self.g)).global_coefficient
        if key == "algebraic_connectivity":
            return self._algebraic_connectivity()
        if key == "spanning_trees":
            return self._cached("spanning_trees", lambda: spanning_tree_count(self.g, self.config))
        if key == "effective_resistance":
            return self._cached("resistance", lambda: effective_graph_resistance(self.g, self.config)).total
        raise UsageError(f"unknown measure '{key}'")

    def safe_value(self, key: str, unavailable: Dict[str, str], warnings: List[str]) -> Optional[Number]:
        """`value` with undefined measures as None and budget failures recorded."""
        try:
            return self.value(key)
        except DomainError:
            return None
        except SOFT_ERRORS as exc:
            reason = str(exc)
            unavailable[key] = reason
            warnings.append(f"{key}:{reason}")
            logger.warning("measure %s unavailable on %r: %s", key, self.g, reason)
            return None


def build_measure_report(
    g: Graph,
    name: str = "",
    bt_mode: str = BT_INCLUDE_FULL,
    config: Optional[RobustnessConfig] = None,
    with_reliability: bool = True,
) -> MeasureReport:
    evaluator = MeasureEvaluator(g, config, bt_mode)
    unavailable: Dict[str, str] = {}
    warnings: List[str] = []
    values = {key: evaluator.safe_value(key, unavailable, warnings) for key in MEASURE_KEYS}

    reliability: Dict[str, Optional[float]] = {}
    if with_reliability:
        for p in evaluator.config.report_probabilities:
            key = reliability_key(p)
            reliability[key] = evaluator.safe_value(key, unavailable, warnings)

    return MeasureReport(
        name=name,
        n=g.n,
        m=g.m,
        bt_mode=evaluator.bt_mode,
        reliability=reliability,
        unavailable=unavailable,
        warnings=warnings,
        **values,
    )


def json_value(value: Any) -> Any:
    if value is None:
        return None
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else float(value)
    if isinstance(value, int):
        return value
    value = float(value)
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


def format_real(value: float) -> str:
    return f"{value:.6g}"


def format_value(value: Any, reason: Optional[str] = None) -> str:
    if value is None:
        return f"n/a({reason})" if reason else "-"
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator} ({format_real(float(value))})"
    if isinstance(value, (bool, int)):
        return str(int(value))
    value = float(value)
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format_real(value)


def report_to_dict(report: MeasureReport) -> Dict[str, Any]:
    payload: Dict[str, Any] = {
        "name": report.name,
        "n": report.n,
        "m": report.m,
        "bt_mode": report.bt_mode,
    }
    exact: Dict[str, str] = {}
    for key in MEASURE_KEYS:
        value = getattr(report, key)
        payload[key] = json_value(value)
        if isinstance(value, Fraction) and value.denominator != 1:
            exact[key] = f"{value.numerator}/{value.denominator}"
    payload["exact"] = exact
    payload["reliability"] = {key: json_value(value) for key, value in report.reliability.items()}
    payload["unavailable"] = dict(report.unavailable)
    payload["warnings"] = list(report.warnings)
    return payload


def render_report_json(report: MeasureReport) -> str:
    return json.dumps(report_to_dict(report), indent=2, sort_keys=True)


def report_cells(report: MeasureReport) -> List[Dict[str, str]]:
    rows = []
    for key in MEASURE_KEYS:
        cell = format_value(getattr(report, key), report.unavailable.get(key))
        if key == "avg_vertex_betweenness" and getattr(report, key) is not None:
            cell = f"{cell} [{report.bt_mode}]"
        rows.append({"measure": key, "value": cell})
    for key, value in report.reliability.items():
        rows.append({"measure": f"{key} (conventional p)", "value": format_value(value, report.unavailable.get(key))})
    return rows


def render_report_table(report: MeasureReport) -> str:
    title = report.name or "graph"
    lines = [f"{title}: n={report.n} m={report.m}", pd.DataFrame(report_cells(report)).to_string(index=False)]
    if report.warnings:
        lines.append("warnings:")
        lines.extend(f"  - {warning}" for warning in report.warnings)
    return "\n".join(lines) + "\n"


def _is_exact(value: Any) -> bool:
    return isinstance(value, (int, Fraction))


def verdict(key: str, first: Any, second: Any, tolerance: float = 1e-9) -> str:
    """Which of two measure values is more robust under the measure's direction."""
    if first is None and second is None:
        return VERDICT_TIE
    if first is None or second is None:
        return VERDICT_NA

    if _is_exact(first) and _is_exact(second):
        equal = first == second
    elif math.isinf(float(first)) or math.isinf(float(second)):
        equal = float(first) == float(second)
    else:
        a, b = float(first), float(second)
        equal = abs(a - b) <= tolerance * max(1.0, abs(a), abs(b))
    if equal:
        return VERDICT_TIE

    first_bigger = first > second
    if measure_direction(key) == HIGHER:
        return VERDICT_FIRST if first_bigger else VERDICT_SECOND
    return VERDICT_SECOND if first_bigger else VERDICT_FIRST


def _asymptotic_verdict(rule: Callable[..., str], g1: Graph, g2: Graph, config: RobustnessConfig) -> Tuple[str, str]:
    try:
        ordering = rule(g1, g2, config)
    except (DomainError,) + SOFT_ERRORS as exc:
        return VERDICT_NA, str(exc)
    if ordering == FIRST_LESS_RELIABLE:
        return VERDICT_SECOND, ordering
    if ordering == SECOND_LESS_RELIABLE:
        return VERDICT_FIRST, ordering
    return VERDICT_TIE, ordering


def compare_graphs(
    g1: Graph,
    g2: Graph,
    names: Tuple[str, str] = ("first", "second"),
    bt_mode: str = BT_INCLUDE_FULL,
    config: Optional[RobustnessConfig] = None,
) -> Dict[str, Any]:
    """Per-measure verdicts on which graph is more robust, plus the asymptotic reliability orderings."""
    config = build_config(config)
    first = build_measure_report(g1, names[0], bt_mode, config)
    second = build_measure_report(g2, names[1], bt_mode, config)

    rows = []
    keys = list(MEASURE_KEYS) + [key for key in first.reliability if key in second.reliability]
    for key in keys:
        a = first.reliability[key] if key.startswith("rel@") else getattr(first, key)
        b = second.reliability[key] if key.startswith("rel@") else getattr(second, key)
        rows.append(
            {
                "measure": key,
                "direction": measure_direction(key),
                "first": json_value(a),
                "second": json_value(b),
                "more_robust": verdict(key, a, b, config.float_tolerance),
            }
        )

    near_one, near_one_detail = _asymptotic_verdict(compare_near_one, g1, g2, config)
    near_zero, near_zero_detail = _asymptotic_verdict(compare_near_zero, g1, g2, config)
    return {
        "names": list(names),
        "bt_mode": first.bt_mode,
        "rows": rows,
        "near_one": {"more_robust": near_one, "detail": near_one_detail},
        "near_zero": {"more_robust": near_zero, "detail": near_zero_detail},
        "warnings": [f"{names[0]}:{w}" for w in first.warnings] + [f"{names[1]}:{w}" for w in second.warnings],
    }


def render_comparison_table(payload: Dict[str, Any]) -> str:
    first_name, second_name = payload["names"]
    rows = []
    for row in payload["rows"]:
        rows.append(
            {
                "measure": row["measure"],
                "better": row["direction"],
                first_name: format_value(row["first"]),
                second_name: format_value(row["second"]),
                "more_robust": _verdict_label(row["more_robust"], payload["names"]),
            }
        )
    for label, key in (("reliability p->1", "near_one"), ("reliability p->0", "near_zero")):
        rows.append(
            {
                "measure": label,
                "better": HIGHER,
                first_name: "",
                second_name: "",
                "more_robust": _verdict_label(payload[key]["more_robust"], payload["names"]),
            }
        )
    lines = [pd.DataFrame(rows).to_string(index=False)]
    if payload["warnings"]:
        lines.append("warnings:")
        lines.extend(f"  - {warning}" for warning in payload["warnings"])
    return "\n".join(lines) + "\n"


def _verdict_label(result: str, names: List[str]) -> str:
    if result == VERDICT_FIRST:
        return names[0]
    if result == VERDICT_SECOND:
        return names[1]
    return result


def _improvement(key: str, before: Any, after: Any) -> float:
    if before is None or after is None:
        return math.nan
    gain = float(after) - float(before) if measure_direction(key) == HIGHER else float(before) - float(after)
    return 0.0 if math.isnan(gain) else gain


def suggest_edges(
    g: Graph,
    measure: str,
    top: Optional[int] = None,
    bt_mode: str = BT_INCLUDE_FULL,
    config: Optional[RobustnessConfig] = None,
    with_deltas: bool = True,
) -> List[EdgeSuggestion]:
    """Rank every absent edge by how much adding it improves `measure`.

    Ties are broken by the lexicographic order of the edge.
    """
    config = build_config(config)
    key, _ = resolve_measure(measure)
    if not is_connected(g):
        raise DomainError("edge suggestions need a connected graph")

    candidates = complement_nonedges(g)
    if not candidates:
        return []

    base = MeasureEvaluator(g, config, bt_mode)
    before = base.value(key)
    suggestions = []
    for edge in candidates:
        candidate = MeasureEvaluator(with_edge(g, *edge), config, bt_mode)
        after = candidate.value(key)
        deltas: Dict[str, Optional[float]] = {}
        if with_deltas:
            for other in MEASURE_KEYS:
                deltas[other] = _delta(base, candidate, other)
        suggestions.append(
            EdgeSuggestion(
                edge=edge,
                measure=key,
                before=before,
                after=after,
                improvement=_improvement(key, before, after),
                deltas=deltas,
            )
        )

    suggestions.sort(key=lambda s: (-s.improvement, s.edge))
    for rank, suggestion in enumerate(suggestions, start=1):
        suggestion.rank = rank
    logger.debug("ranked %d candidate edges by %s", len(suggestions), key)
    return suggestions if top is None else suggestions[: max(0, int(top))]


def _delta(base: MeasureEvaluator, candidate: MeasureEvaluator, key: str) -> Optional[float]:
    scratch: Dict[str, str] = {}
    before = base.safe_value(key, scratch, [])
    after = candidate.safe_value(key, scratch, [])
    if before is None or after is None:
        return None
    change = float(after) - float(before)
    return None if math.isnan(change) else change


def suggestions_to_dicts(suggestions: List[EdgeSuggestion]) -> List[Dict[str, Any]]:
    return [
        {
            "rank": s.rank,
            "edge": list(s.edge),
            "measure": s.measure,
            "before": json_value(s.before),
            "after": json_value(s.after),
            "improvement": json_value(s.improvement),
            "deltas": {key: json_value(value) for key, value in s.deltas.items()},
        }
        for s in suggestions
    ]


def render_suggestions_table(suggestions: List[EdgeSuggestion]) -> str:
    if not suggestions:
        return "no absent edges to add\n"
    rows = [
        {
            "rank": s.rank,
            "edge": f"{s.edge[0]}-{s.edge[1]}",
            "before": format_value(s.before),
            "after": format_value(s.after),
            "improvement": format_value(s.improvement),
        }
        for s in suggestions
    ]
    header = f"measure: {suggestions[0].measure} (better: {measure_direction(suggestions[0].measure)})"
    return header + "\n" + pd.DataFrame(rows).to_string(index=False) + "\n"


def audit_edge_addition(
    g: Graph,
    bt_mode: str = BT_INCLUDE_FULL,
    config: Optional[RobustnessConfig] = None,
) -> CriteriaAudit:
    """Count, per measure, how adding each absent edge changes robustness.

    A measure that improves on every candidate is strictly increasing under
    edge addition on this graph.
    """
    config = build_config(config)
    keys = list(MEASURE_KEYS) + [reliability_key(p) for p in config.report_probabilities]
    rows = {key: MeasureCriteria(measure=key, direction=measure_direction(key)) for key in keys}
    warnings: List[str] = []

    base = MeasureEvaluator(g, config, bt_mode)
    unavailable: Dict[str, str] = {}
    before = {key: base.safe_value(key, unavailable, warnings) for key in keys}
    candidates = complement_nonedges(g)
    for edge in candidates:
        candidate = MeasureEvaluator(with_edge(g, *edge), config, bt_mode)
        for key in keys:
            if key in unavailable:
                continue
            after = candidate.safe_value(key, unavailable, warnings)
            result = verdict(key, before[key], after, config.float_tolerance)
            if result == VERDICT_SECOND:
                rows[key].improved += 1
            elif result == VERDICT_FIRST:
                rows[key].worsened += 1
            elif result == VERDICT_TIE:
                rows[key].tied += 1

    return CriteriaAudit(n=g.n, m=g.m, candidates=len(candidates), rows=[rows[key] for key in keys], warnings=warnings)


def audit_to_dict(audit: CriteriaAudit) -> Dict[str, Any]:
    return {
        "n": audit.n,
        "m": audit.m,
        "candidates": audit.candidates,
        "rows": [
            {
                "measure": row.measure,
                "direction": row.direction,
                "improved": row.improved,
                "tied": row.tied,
                "worsened": row.worsened,
                "strictly_increasing": row.strictly_increasing,
            }
            for row in audit.rows
        ],
        "warnings": list(audit.warnings),
    }


def render_audit_table(audit: CriteriaAudit) -> str:
    lines = [f"n={audit.n} m={audit.m} absent edges={audit.candidates}"]
    if audit.candidates:
        frame = pd.DataFrame(audit_to_dict(audit)["rows"])
        frame["strictly_increasing"] = frame["strictly_increasing"].map({True: "yes", False: "no"})
        lines.append(frame.to_string(index=False))
    else:
        lines.append("graph is complete; no edge can be added")
    if audit.warnings:
        lines.append("warnings:")
        lines.extend(f"  - {warning}" for warning in audit.warnings)
    return "\n".join(lines) + "\n"
