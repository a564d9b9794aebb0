"""Command-line frontend: `xsat` with subcommands sat, check, mono, prefixes,
join, sjoin, unfold, oracle, serve.

Exit codes are stable: 0 saturated / document is a model, 1 document is not
a model, 2 usage or parse error, 3 no bounded model, 10 proved unsatisfiable,
20 resource limit reached.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from .algebra import descendant_edges, join, shared_join, unfold_edge
from .logic import Specification
from .morphisms import (
    NodeMap,
    enumerate_monomorphisms,
    enumerate_prefix_functions,
    has_extension,
    is_monomorphism,
    is_prefix_function,
)
from .oracle import OracleBound, bounded_sat, default_bound
from .patterns import Document, Pattern
from .refutation import (
    LIMIT_REACHED,
    SATURATED,
    UNSATISFIABLE,
    RunConfig,
    RunResult,
    run,
)
from .textio import (
    ParseError,
    SpecParseError,
    format_history,
    format_mapping,
    ingest_xml,
    parse_document_native,
    parse_pattern,
    parse_spec,
    print_pattern,
)

EXIT_OK = 0
EXIT_NOT_MODEL = 1
EXIT_USAGE = 2
EXIT_NO_MODEL_IN_BOUND = 3
EXIT_UNSAT = 10
EXIT_LIMIT = 20

_VERDICT_EXIT = {SATURATED: EXIT_OK, UNSATISFIABLE: EXIT_UNSAT, LIMIT_REACHED: EXIT_LIMIT}


class CliError(Exception):
    pass


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror or e}") from e


def _load_spec(path: str) -> Specification:
    return parse_spec(_read_text(path))


def _pattern_arg(arg: str) -> Pattern:
    """A pattern given inline or as @file."""
    text = _read_text(arg[1:]) if arg.startswith("@") else arg
    return parse_pattern(text)


def _load_document(path: str, xml_attrs: bool, xml_text: bool) -> Document:
    if path.lower().endswith(".xml"):
        return ingest_xml(_read_text(path), attrs=xml_attrs, text=xml_text)
    return parse_document_native(_read_text(path))


def _parse_mapping_flag(value: str, source: Pattern, target: Pattern) -> NodeMap:
    pairs = []
    inner = value.strip()
    if inner.startswith("["):
        inner = inner[1:-1] if inner.endswith("]") else inner[1:]
    for chunk in inner.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        left, _, right = chunk.partition("->")
        pairs.append((int(left), int(right)))
    mapping: list[Optional[int]] = [None] * source.size
    for i, j in pairs:
        if not 0 <= i < source.size or not 0 <= j < target.size:
            raise CliError(f"mapping pair {i}->{j} out of range")
        mapping[i] = j
    if any(m is None for m in mapping):
        raise CliError("mapping must cover every source node")
    return NodeMap(source, target, tuple(mapping))  # type: ignore[arg-type]


def run_result_payload(result: RunResult) -> dict:
    return {
        "verdict": result.verdict,
        "steps": result.history[-1].steps if result.history else 0,
        "elapsedMs": result.elapsed_ms,
        "clauseCount": len(result.final_clauses.clauses),
        "cancelled": result.cancelled,
    }


def _cmd_sat(args) -> int:
    spec = _load_spec(args.spec)
    cfg = RunConfig(
        version=args.version,
        max_steps=args.max_steps,
        max_clauses=args.max_clauses,
        max_pattern_nodes=args.max_pattern_nodes,
        unfold_rounds=args.unfold_rounds,
        time_budget_ms=args.time_budget_ms,
    )
    result = run(spec, cfg)
    if args.history:
        Path(args.history).write_text(format_history(result.history), encoding="utf-8")
    if args.json:
        print(json.dumps(run_result_payload(result)))
    else:
        steps = result.history[-1].steps if result.history else 0
        print(f"{result.verdict} steps={steps} elapsed-ms={result.elapsed_ms}")
    return _VERDICT_EXIT[result.verdict]


def _cmd_check(args) -> int:
    from .logic import check_document

    spec = _load_spec(args.spec)
    doc = _load_document(args.document, args.xml_attrs, args.xml_text)
    report = check_document(doc, spec)
    print("TRUE" if report.overall else "FALSE")
    if args.report:
        for cid, ok in report.per_clause:
            print(f"{cid} {'TRUE' if ok else 'FALSE'}")
    return EXIT_OK if report.overall else EXIT_NOT_MODEL


def _cmd_maps(args, exact: bool) -> int:
    source = _pattern_arg(args.source)
    target = _pattern_arg(args.target)
    found = (
        enumerate_prefix_functions(source, target)
        if exact
        else enumerate_monomorphisms(source, target)
    )
    for m in found:
        print(format_mapping(m.pairs()))
    print(f"count={len(found)}")
    return EXIT_OK


def _cmd_join(args) -> int:
    p1 = _pattern_arg(args.p1)
    p2 = _pattern_arg(args.p2)
    for m in join(p1, p2):
        print(print_pattern(m.pattern))
    return EXIT_OK


def _cmd_sjoin(args) -> int:
    p1 = _pattern_arg(args.p1)
    p2 = _pattern_arg(args.p2)
    q = _pattern_arg(args.q)
    if args.prefix:
        c = _parse_mapping_flag(args.prefix, p2, q)
        if not is_prefix_function(c):
            raise CliError("--prefix is not a prefix function")
    else:
        candidates = enumerate_prefix_functions(p2, q)
        if len(candidates) != 1:
            raise CliError(
                f"prefix function is ambiguous or missing ({len(candidates)} candidates); use --prefix"
            )
        c = candidates[0]
    if args.mono:
        m = _parse_mapping_flag(args.mono, p2, p1)
        if not is_monomorphism(m):
            raise CliError("--mono is not a monomorphism")
        monos = [m]
    else:
        qualifying = [
            m for m in enumerate_monomorphisms(p2, p1) if not has_extension(c, m)
        ]
        if len(qualifying) != 1:
            raise CliError(
                f"monomorphism is ambiguous or missing ({len(qualifying)} qualifying candidates); use --mono"
            )
        monos = qualifying
    for m in monos:
        for res in shared_join(p1, q, c, m):
            print(print_pattern(res.pattern))
    return EXIT_OK


def _cmd_unfold(args) -> int:
    p = _pattern_arg(args.pattern)
    if args.edge is not None:
        edge = args.edge
    else:
        edges = descendant_edges(p)
        if not edges:
            raise CliError("pattern has no descendant edge to unfold")
        edge = edges[0]
    try:
        parts = unfold_edge(p, edge)
    except ValueError as e:
        raise CliError(str(e)) from e
    for q in parts:
        print(print_pattern(q))
    return EXIT_OK


def _cmd_oracle(args) -> int:
    spec = _load_spec(args.spec)
    if args.labels:
        labels = tuple(x for x in (s.strip() for s in args.labels.split(",")) if x)
        if not labels:
            raise CliError("--labels must list at least one label")
        bound = OracleBound(labels, args.max_nodes)
    else:
        bound = default_bound(spec, args.max_nodes)
    witness = bounded_sat(spec, bound)
    if witness is None:
        print("NO-MODEL-WITHIN-BOUND")
        return EXIT_NO_MODEL_IN_BOUND
    print(f"WITNESS {print_pattern(witness.document.pattern)}")
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(state_dir=args.state_dir, cors_origin=args.cors_origin)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xsat",
        description="Satisfiability workbench for tree-pattern clause specifications.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sat = sub.add_parser("sat", help="run the refutation procedure on a .spec file")
    p_sat.add_argument("spec")
    p_sat.add_argument("--version", type=int, choices=(1, 2), default=1)
    p_sat.add_argument("--max-steps", type=int, default=10000)
    p_sat.add_argument("--max-clauses", type=int, default=2000)
    p_sat.add_argument("--max-pattern-nodes", type=int, default=64)
    p_sat.add_argument("--unfold-rounds", type=int, default=3)
    p_sat.add_argument("--time-budget-ms", type=int, default=None)
    p_sat.add_argument("--history", metavar="PATH", help="write the history file")
    p_sat.add_argument("--json", action="store_true", help="emit the run-result JSON")
    p_sat.set_defaults(func=_cmd_sat)

    p_check = sub.add_parser("check", help="check a document against a .spec file")
    p_check.add_argument("spec")
    p_check.add_argument("document", help=".tree or .xml file")
    p_check.add_argument("--report", action="store_true", help="per-clause verdicts")
    p_check.add_argument("--xml-attrs", action="store_true")
    p_check.add_argument("--xml-text", action="store_true")
    p_check.set_defaults(func=_cmd_check)

    p_mono = sub.add_parser("mono", help="enumerate monomorphisms source -> target")
    p_mono.add_argument("source", help="pattern text or @file")
    p_mono.add_argument("target")
    p_mono.set_defaults(func=lambda a: _cmd_maps(a, exact=False))

    p_pref = sub.add_parser("prefixes", help="enumerate prefix functions source -> target")
    p_pref.add_argument("source")
    p_pref.add_argument("target")
    p_pref.set_defaults(func=lambda a: _cmd_maps(a, exact=True))

    p_join = sub.add_parser("join", help="combine two patterns")
    p_join.add_argument("p1")
    p_join.add_argument("p2")
    p_join.set_defaults(func=_cmd_join)

    p_sjoin = sub.add_parser("sjoin", help="combine p1 with q sharing p2")
    p_sjoin.add_argument("p1")
    p_sjoin.add_argument("p2", help="the shared pattern")
    p_sjoin.add_argument("q", help="the conclusion extending p2")
    p_sjoin.add_argument("--prefix", help="mapping p2 -> q, e.g. [0->0,1->1]")
    p_sjoin.add_argument("--mono", help="mapping p2 -> p1")
    p_sjoin.set_defaults(func=_cmd_sjoin)

    p_unfold = sub.add_parser("unfold", help="unfold a descendant edge")
    p_unfold.add_argument("pattern")
    p_unfold.add_argument("--edge", type=int, default=None, help="node id (default: first)")
    p_unfold.set_defaults(func=_cmd_unfold)

    p_oracle = sub.add_parser("oracle", help="search for a bounded model")
    p_oracle.add_argument("spec")
    p_oracle.add_argument("--labels", help="comma-separated label universe")
    p_oracle.add_argument("--max-nodes", type=int, default=5)
    p_oracle.set_defaults(func=_cmd_oracle)

    p_serve = sub.add_parser("serve", help="start the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8640)
    p_serve.add_argument("--state-dir", default=None)
    p_serve.add_argument("--cors-origin", default="*")
    p_serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else 0
    try:
        return args.func(args)
    except SpecParseError as e:
        for err in e.errors:
            print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, CliError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def console_main() -> None:  # pragma: no cover - thin wrapper
    sys.exit(main())
