"""Command-line entry point: ``verify``, ``table`` and ``graph``."""

from __future__ import annotations

import argparse
import json
import sys

from . import catalog
from .suite import UsageError, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _flag(value: bool) -> str:
    return "yes" if value else "--"


def render_table_text(rows=None) -> str:
    rows = catalog.ROWS if rows is None else rows
    out = ["d | type | lines | toric | Ga^2 | criterion"]
    for t in rows:
        out.append(f"{t.degree} | {t.label} | {t.lines} | {_flag(t.toric)} | {_flag(t.additive)} | "
                   f"criterion: {catalog.criterion_text(t)}")
    return "\n".join(out) + "\n"


def render_table_json(rows=None) -> str:
    rows = catalog.ROWS if rows is None else rows
    return json.dumps([catalog.row_to_json(t) for t in rows], indent=2) + "\n"


def render_graph_dot() -> str:
    graph = catalog.blowup_graph()
    out = ["digraph blowups {", "  rankdir=TB;"]
    for t in sorted(graph.nodes, key=lambda t: (t.degree, t.node_name)):
        style = "box" if t.additive else "plaintext"
        out.append(f'  "{t.node_name}" [shape={style}];')
    for a, b in sorted(graph.edges, key=lambda e: (e[0].node_name, e[1].node_name)):
        out.append(f'  "{a.node_name}" -> "{b.node_name}";')
    out.append("}")
    return "\n".join(out) + "\n"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gacompact", description="Checks for additive compactifications of del Pezzo surfaces.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    verify = sub.add_parser("verify", help="run the verification suite")
    verify.add_argument("--filter", metavar="PATTERN", help="glob over check names, e.g. 'd5*'")
    verify.add_argument("--format", choices=("text", "json"), default="text")
    verify.add_argument("--timings", action="store_true", help="include wall times (output stops being reproducible)")

    table = sub.add_parser("table", help="print the classification table")
    table.add_argument("--format", choices=("text", "json"), default="text")

    graph = sub.add_parser("graph", help="export the blow-up graph")
    graph.add_argument("--format", choices=("dot",), required=True)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "verify":
            report = run_suite(args.filter)
            if args.format == "json":
                sys.stdout.write(report.dumps(timings=args.timings) + "\n")
            else:
                sys.stdout.write(report.render_text(timings=args.timings))
            return EXIT_OK if report.passed else EXIT_FAIL
        if args.command == "table":
            sys.stdout.write(render_table_json() if args.format == "json" else render_table_text())
            return EXIT_OK
        sys.stdout.write(render_graph_dot())
        return EXIT_OK
    except UsageError as exc:
        print(f"gacompact: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
