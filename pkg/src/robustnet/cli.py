import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from .errors import EXIT_OK, EXIT_USAGE, RobustnetError, UsageError
from .graph_core import GraphFamily, generate, read_edge_list, write_edge_list
from .measure_report import (
    audit_edge_addition,
    audit_to_dict,
    build_measure_report,
    compare_graphs,
    render_audit_table,
    render_comparison_table,
    render_report_json,
    render_report_table,
    render_suggestions_table,
    suggest_edges,
    suggestions_to_dicts,
)
from .reliability import curve_csv, reliability_coefficients, reliability_monte_carlo
from .robust_types import RobustnessConfig, build_config, load_config

logger = logging.getLogger(__name__)

BT_MODE_CHOICES = ["exclude", "full", "half", "include-full", "include-half"]


class _ArgumentParser(argparse.ArgumentParser):
    """Raises UsageError instead of exiting with argparse's status 2."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _graph_name(path: str) -> str:
    return Path(path).stem


def _format_power_basis(basis) -> str:
    terms = []
    for power, coeff in enumerate(basis):
        if not coeff:
            continue
        sign = "-" if coeff < 0 else "+"
        magnitude = abs(coeff)
        if power == 0:
            body = str(magnitude)
        else:
            variable = "p" if power == 1 else f"p^{power}"
            body = variable if magnitude == 1 else f"{magnitude}{variable}"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first_body = terms[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in terms[1:]:
        text += f" {sign} {body}"
    return text


def cmd_measures(args: argparse.Namespace, config: RobustnessConfig) -> int:
    g = read_edge_list(args.file)
    report = build_measure_report(g, name=_graph_name(args.file), bt_mode=args.bt_mode, config=config)
    if args.json:
        print(render_report_json(report))
    else:
        print(render_report_table(report), end="")
    return EXIT_OK


def cmd_compare(args: argparse.Namespace, config: RobustnessConfig) -> int:
    first = read_edge_list(args.first)
    second = read_edge_list(args.second)
    names = (_graph_name(args.first), _graph_name(args.second))
    if names[0] == names[1]:
        names = (args.first, args.second)
    payload = compare_graphs(first, second, names=names, bt_mode=args.bt_mode, config=config)
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(render_comparison_table(payload), end="")
    return EXIT_OK


def cmd_relpoly(args: argparse.Namespace, config: RobustnessConfig) -> int:
    g = read_edge_list(args.file)
    if args.grid is not None and args.at is not None:
        raise UsageError("pass either --grid or --at, not both")

    if args.mc is not None:
        points = [args.at] if args.at is not None else None
        if points is None:
            grid = args.grid if args.grid is not None else 10
            points = [j / grid for j in range(grid + 1)]
        print(f"monte carlo: {args.mc} trials, seed {args.seed}")
        print("p,rel,half_width")
        for p in points:
            estimate = reliability_monte_carlo(g, p, args.mc, args.seed, config)
            print(f"{p:.6f},{estimate.estimate:.6f},{estimate.half_width:.6f}")
        return EXIT_OK

    poly = reliability_coefficients(g, config)
    print("F = (" + ", ".join(str(c) for c in poly.coeffs) + ")")
    print(f"Rel(p) = {_format_power_basis(poly.power_basis())}")
    if args.at is not None:
        print(f"Rel({args.at:g}) = {float(poly.evaluate(args.at)):.6f}")
    elif args.grid is not None:
        print(curve_csv(poly, args.grid), end="")
    else:
        for p in config.report_probabilities:
            print(f"Rel({p:g}) = {float(poly.evaluate(p)):.6f}  (conventional p)")
    return EXIT_OK


def cmd_suggest_edge(args: argparse.Namespace, config: RobustnessConfig) -> int:
    g = read_edge_list(args.file)
    suggestions = suggest_edges(g, args.measure, top=args.top, bt_mode=args.bt_mode, config=config)
    if args.json:
        print(json.dumps(suggestions_to_dicts(suggestions), indent=2, sort_keys=True))
    else:
        print(render_suggestions_table(suggestions), end="")
    return EXIT_OK


def cmd_gen(args: argparse.Namespace, config: RobustnessConfig) -> int:
    g = generate(GraphFamily(args.family, args.order))
    target = write_edge_list(g, args.out)
    print(f"wrote {args.family}{args.order} (n={g.n}, m={g.m}) to {target}")
    return EXIT_OK


def cmd_criteria(args: argparse.Namespace, config: RobustnessConfig) -> int:
    g = read_edge_list(args.file)
    audit = audit_edge_addition(g, bt_mode=args.bt_mode, config=config)
    if args.json:
        print(json.dumps(audit_to_dict(audit), indent=2, sort_keys=True))
    else:
        print(render_audit_table(audit), end="")
    return EXIT_OK


def _probability(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text}") from None
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"probability must lie in [0, 1], got {value}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="robustnet",
        description="Graph robustness measures, reliability polynomials and edge-addition advice.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  robustnet gen C 4 graphs/c4.txt
  robustnet measures graphs/c4.txt --bt-mode half
  robustnet compare graphs/c4.txt graphs/s4.txt
  robustnet relpoly graphs/k4.txt --grid 4
  robustnet relpoly big.txt --at 0.9 --mc 100000 --seed 7
  robustnet suggest-edge graphs/p4.txt --measure R --top 3
  robustnet criteria graphs/p4.txt

Exit codes: 0 ok, 1 usage, 2 parse, 3 capacity, 4 numeric.
        """,
    )
    parser.add_argument("--config", type=str, default=None, help="Path to a JSON file of RobustnessConfig overrides")
    parser.add_argument("-v", "--verbose", action="store_true", help="Log strategy choices at DEBUG level")
    subparsers = parser.add_subparsers(dest="command", required=True)

    measures = subparsers.add_parser("measures", help="Report every robustness measure of one graph")
    measures.add_argument("file", help="Edge-list file")
    measures.add_argument("--json", action="store_true", help="Print JSON instead of a table")
    measures.add_argument("--bt-mode", choices=BT_MODE_CHOICES, default="full", help="Endpoint convention for vertex betweenness")
    measures.set_defaults(handler=cmd_measures)

    compare = subparsers.add_parser("compare", help="Which of two graphs each measure deems more robust")
    compare.add_argument("first", help="First edge-list file")
    compare.add_argument("second", help="Second edge-list file")
    compare.add_argument("--json", action="store_true", help="Print JSON instead of a table")
    compare.add_argument("--bt-mode", choices=BT_MODE_CHOICES, default="full", help="Endpoint convention for vertex betweenness")
    compare.set_defaults(handler=cmd_compare)

    relpoly = subparsers.add_parser("relpoly", help="Reliability polynomial coefficients and curve samples")
    relpoly.add_argument("file", help="Edge-list file")
    relpoly.add_argument("--grid", type=_positive_int, default=None, help="Print K+1 evenly spaced (p, rel) CSV rows")
    relpoly.add_argument("--at", type=_probability, default=None, help="Evaluate at a single probability")
    relpoly.add_argument("--mc", type=_positive_int, default=None, help="Estimate by Monte Carlo with this many trials")
    relpoly.add_argument("--seed", type=int, default=0, help="Seed for --mc (default: 0)")
    relpoly.set_defaults(handler=cmd_relpoly)

    suggest = subparsers.add_parser("suggest-edge", help="Rank absent edges by improvement of one measure")
    suggest.add_argument("file", help="Edge-list file")
    suggest.add_argument("--measure", required=True, help="Measure key, alias (R, xi, lambda2, ...) or rel@P")
    suggest.add_argument("--top", type=_positive_int, default=None, help="Keep only the best K suggestions")
    suggest.add_argument("--json", action="store_true", help="Print JSON instead of a table")
    suggest.add_argument("--bt-mode", choices=BT_MODE_CHOICES, default="full", help="Endpoint convention for vertex betweenness")
    suggest.set_defaults(handler=cmd_suggest_edge)

    gen = subparsers.add_parser("gen", help="Write a named graph family as an edge list")
    gen.add_argument("family", help="K, C, S, P or O")
    gen.add_argument("order", type=int, help="Number of vertices")
    gen.add_argument("out", help="Output edge-list path")
    gen.set_defaults(handler=cmd_gen)

    criteria = subparsers.add_parser("criteria", help="Audit which measures strictly improve under every edge addition")
    criteria.add_argument("file", help="Edge-list file")
    criteria.add_argument("--json", action="store_true", help="Print JSON instead of a table")
    criteria.add_argument("--bt-mode", choices=BT_MODE_CHOICES, default="full", help="Endpoint convention for vertex betweenness")
    criteria.set_defaults(handler=cmd_criteria)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"robustnet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        config = build_config(load_config(args.config) if args.config else None)
        return args.handler(args, config)
    except RobustnetError as exc:
        print(f"robustnet: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, json.JSONDecodeError) as exc:
        print(f"robustnet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
