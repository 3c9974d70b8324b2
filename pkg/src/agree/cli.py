"""Command-line entry point.

Exit codes: 0 success, 1 input/validation error, 2 check/law failure,
3 no match found.  Diagnostics go to standard error; results to standard
output or the requested files, always in canonical form.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import io as docio
from .classifier import t_object
from .core import GR, GRPOL, Graph, typed_over, validate_morphism
from .errors import DocumentError, GraphError
from .laws import LAW_IDS, default_instance, run_law
from .rewrite import (
    agree_step,
    enumerate_matches,
    fpbc,
    fpbc_verify,
    is_local_rule,
    psqpo_step,
    strict_complement,
)

_LAW_CATEGORIES = {
    "LOCALITY": ("gr", "typed"),
    "SQPO_AGREE": ("gr", "typed"),
    "FPBC_FINAL": ("gr", "typed"),
    "PSQPO_AGREE": ("gr",),
}


def _load(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _emit(text, path=None):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _graph_instance(doc, typegraph_path=None):
    if typegraph_path:
        tg = docio.parse_graph(_load(typegraph_path))
        if not isinstance(tg, Graph):
            raise DocumentError([("/", "the type graph must be a plain graph")])
        return typed_over(tg)
    if any("polarity" in n for n in doc.get("nodes", [])):
        return GRPOL
    return GR


def _rule_and_graph(args):
    rule, instance = docio.parse_rule(_load(args.rule))
    gdoc = _load(args.graph)
    host = docio.parse_graph(gdoc, instance.typegraph)
    return rule, host, instance


def cmd_matches(args) -> int:
    rule, host, instance = _rule_and_graph(args)
    match_instance = GR if rule.mode == "PSQPO" else instance
    matches = enumerate_matches(rule.lhs, host, match_instance)
    _emit(docio.dumps([docio.morphism_doc(m) for m in matches]))
    return 0


def _pick_match(args, rule, host, instance) -> tuple:
    match_instance = GR if rule.mode == "PSQPO" else instance
    if args.match:
        m = docio.parse_morphism(_load(args.match), source=rule.lhs, target=host)
        if not validate_morphism(m, match_instance).is_mono_in_M:
            raise DocumentError([("/", "the given match is not an admissible mono")])
        return m, match_instance
    matches = enumerate_matches(rule.lhs, host, match_instance)
    index = args.match_index if args.match_index is not None else 0
    if index < 0 or index >= len(matches):
        return None, match_instance
    return matches[index], match_instance


def cmd_apply(args) -> int:
    rule, host, instance = _rule_and_graph(args)
    m, _ = _pick_match(args, rule, host, instance)
    if m is None:
        print("no match found", file=sys.stderr)
        return 3
    trace = psqpo_step(rule, m) if rule.mode == "PSQPO" else agree_step(rule, m, instance)
    _emit(docio.dumps(docio.graph_doc(trace.result)), args.out)
    if args.trace:
        _emit(docio.dumps(docio.trace_doc(trace, instance)), args.trace)
    if args.dot:
        _emit(docio.export_dot(trace), args.dot)
    return 0


def cmd_classifier(args) -> int:
    gdoc = _load(args.graph)
    instance = _graph_instance(gdoc, args.typegraph)
    obj = docio.parse_graph(gdoc, instance.typegraph)
    cls = t_object(obj, instance)
    _emit(docio.dumps({"total": docio.graph_doc(cls.total), "unit": docio.morphism_doc(cls.unit)}))
    return 0


def cmd_fpbc(args) -> int:
    ldoc = _load(args.l)
    mdoc = _load(args.m)
    instance = _graph_instance(ldoc.get("target", {}), args.typegraph)
    l = docio.parse_morphism(ldoc, typegraph=instance.typegraph)
    m = docio.parse_morphism(mdoc, source=l.target, target=None, typegraph=instance.typegraph)
    result = fpbc(l, m, instance)
    _emit(docio.dumps({
        "D": docio.graph_doc(result.context),
        "n": docio.morphism_doc(result.n),
        "a": docio.morphism_doc(result.a),
    }))
    if args.verify:
        report = fpbc_verify(l, m, result.n, result.a, instance, size_bound=args.bound)
        print(f"finality: {'ok' if report.ok else 'FAILED'} "
              f"(bound={report.bound}, cones={report.cones_checked})", file=sys.stderr)
        if not report.ok:
            print(docio.dumps(report.counterexample), file=sys.stderr)
            return 2
    return 0


def cmd_check_rule(args) -> int:
    rule, instance = docio.parse_rule(_load(args.rule))
    check_instance = GR if rule.mode == "PSQPO" else instance
    in_m = validate_morphism(rule.t, check_instance).is_mono_in_M
    local = is_local_rule(rule, check_instance)
    print(f"mode: {rule.mode}")
    print(f"embedding-in-M: {str(in_m).lower()}")
    print(f"local: {str(local).lower()}")
    return 0


def cmd_complement(args) -> int:
    mdoc = _load(args.m)
    instance = _graph_instance(mdoc.get("target", {}), args.typegraph)
    m = docio.parse_morphism(mdoc, typegraph=instance.typegraph)
    if not validate_morphism(m, instance).is_mono_in_M:
        raise DocumentError([("/", "strict complements are taken of admissible monos")])
    comp, incl = strict_complement(m, instance)
    _emit(docio.dumps({"complement": docio.graph_doc(comp), "inclusion": docio.morphism_doc(incl)}))
    return 0


def cmd_laws(args) -> int:
    instance = default_instance(args.category)
    ids = [args.law] if args.law else [
        law for law in LAW_IDS if instance.kind in _LAW_CATEGORIES.get(law, ("gr", "typed", "grpol"))
    ]
    bound = (args.bound, args.bound + 1)
    failed = False
    for law in ids:
        report = run_law(law, seed=args.seed, size_bound=bound, instance=instance)
        status = "PASS" if report.passed else "FAIL"
        print(f"{law} [{report.instance}]: {status} "
              f"(instances={report.count}, seed={report.seed}, bound={report.size_bound})")
        if not report.passed:
            failed = True
            print(docio.dumps(report.first_counterexample), file=sys.stderr)
    return 2 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="agree",
        description="Graph rewriting with controlled embedding: apply rules, "
                    "inspect classifiers and complements, verify the law suite.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("matches", help="list all admissible matches of a rule in a graph")
    p.add_argument("--rule", required=True)
    p.add_argument("--graph", required=True)
    p.set_defaults(func=cmd_matches)

    p = sub.add_parser("apply", help="apply a rule at a match")
    p.add_argument("--rule", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--match", help="morphism document for the match")
    p.add_argument("--match-index", type=int, default=None,
                   help="index into the deterministic match enumeration (default 0)")
    p.add_argument("--out", help="write the result graph here instead of stdout")
    p.add_argument("--trace", help="write the full step trace here")
    p.add_argument("--dot", help="write a DOT rendering of the trace here")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("classifier", help="emit the enlargement T(G) and its unit")
    p.add_argument("--graph", required=True)
    p.add_argument("--typegraph")
    p.set_defaults(func=cmd_classifier)

    p = sub.add_parser("fpbc", help="final pullback complement of l and m")
    p.add_argument("--l", required=True, help="arrow document K -> L with embedded graphs")
    p.add_argument("--m", required=True, help="arrow document L -> G with embedded target")
    p.add_argument("--typegraph")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--bound", type=int, default=None)
    p.set_defaults(func=cmd_fpbc)

    p = sub.add_parser("check-rule", help="report a rule's mode, embedding and locality")
    p.add_argument("--rule", required=True)
    p.set_defaults(func=cmd_check_rule)

    p = sub.add_parser("complement", help="strict complement of a mono")
    p.add_argument("--m", required=True, help="arrow document with embedded graphs")
    p.add_argument("--typegraph")
    p.set_defaults(func=cmd_complement)

    p = sub.add_parser("laws", help="run the law suite")
    p.add_argument("--law", choices=LAW_IDS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bound", type=int, default=4, help="node bound; edge bound is one more")
    p.add_argument("--category", choices=("gr", "typed", "pol"), default="gr")
    p.set_defaults(func=cmd_laws)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DocumentError as exc:
        for path, msg in exc.errors:
            print(f"error: {path}: {msg}", file=sys.stderr)
        return 1
    except (GraphError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
