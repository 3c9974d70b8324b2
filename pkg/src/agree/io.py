"""JSON documents for graphs, morphisms, rules and traces, plus DOT export.

Serialization is canonical: object keys are emitted sorted, arrays are
sorted by id, text is UTF-8 with LF line endings.  Parsing validates and
reports every problem with a JSON-pointer-like position and the violated
invariant, not just the first one.
"""

from __future__ import annotations

import json
from typing import Optional

from .core import (
    GR,
    CategoryInstance,
    Graph,
    Morphism,
    PolarizedGraph,
    TypedGraph,
    carrier,
    typed_over,
)
from .errors import DocumentError
from .rewrite import Rule, RewriteTrace, agree_rule, psqpo_rule, sqpo_rule

__all__ = [
    "dumps",
    "graph_doc",
    "parse_graph",
    "morphism_doc",
    "parse_morphism",
    "rule_doc",
    "parse_rule",
    "trace_doc",
    "export_dot",
]


def dumps(doc) -> str:
    """Canonical JSON text for a document."""
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# -- graphs -------------------------------------------------------------------


def graph_doc(obj) -> dict:
    """Serialize any of the three object kinds to a GraphDoc."""
    g = carrier(obj)
    nodes = []
    for n in sorted(g.nodes):
        entry = {"id": n}
        if isinstance(obj, TypedGraph):
            entry["type"] = obj.typing.nodemap[n]
        elif isinstance(obj, PolarizedGraph):
            entry["polarity"] = [s for s, present in (("+", n in obj.nplus), ("-", n in obj.nminus)) if present]
        nodes.append(entry)
    edges = []
    for e in sorted(g.src):
        entry = {"id": e, "src": g.src[e], "tgt": g.tgt[e]}
        if isinstance(obj, TypedGraph):
            entry["type"] = obj.typing.edgemap[e]
        edges.append(entry)
    return {"nodes": nodes, "edges": edges}


def parse_graph(doc, typegraph: Optional[Graph] = None, path: str = ""):
    """Parse a GraphDoc.

    With ``typegraph`` the result is a typed graph; otherwise the presence
    of any ``polarity`` key selects a polarized graph, else a plain one.
    """
    errors = []
    if not isinstance(doc, dict):
        raise DocumentError([(path or "/", "graph document must be an object")])
    nodes = doc.get("nodes", [])
    edges = doc.get("edges", [])

    seen_nodes = {}
    polarized = False
    for i, entry in enumerate(nodes):
        p = f"{path}/nodes/{i}"
        if not isinstance(entry, dict) or "id" not in entry:
            errors.append((p, "node entries need an 'id'"))
            continue
        nid = entry["id"]
        if nid in seen_nodes:
            errors.append((p, f"duplicate node id {nid!r}"))
            continue
        if "polarity" in entry:
            polarized = True
            bad = set(entry["polarity"]) - {"+", "-"}
            if bad:
                errors.append((p + "/polarity", f"polarity entries must be '+' or '-', got {sorted(bad)!r}"))
        seen_nodes[nid] = entry

    seen_edges = {}
    for i, entry in enumerate(edges):
        p = f"{path}/edges/{i}"
        if not isinstance(entry, dict) or not {"id", "src", "tgt"} <= set(entry):
            errors.append((p, "edge entries need 'id', 'src' and 'tgt'"))
            continue
        eid = entry["id"]
        if eid in seen_edges:
            errors.append((p, f"duplicate edge id {eid!r}"))
            continue
        for end in ("src", "tgt"):
            if entry[end] not in seen_nodes:
                errors.append((p + f"/{end}", f"dangling endpoint: {entry[end]!r} is not a node id"))
        seen_edges[eid] = entry

    if typegraph is not None:
        if polarized:
            errors.append((f"{path}/nodes", "typed documents cannot carry polarity"))
        for nid, entry in seen_nodes.items():
            if "type" not in entry:
                errors.append((f"{path}/nodes", f"node {nid!r} is missing a type"))
            elif entry["type"] not in typegraph.nodes:
                errors.append((f"{path}/nodes", f"node {nid!r} has unknown type {entry['type']!r}"))
        for eid, entry in seen_edges.items():
            if "type" not in entry:
                errors.append((f"{path}/edges", f"edge {eid!r} is missing a type"))
            elif entry["type"] not in typegraph.src:
                errors.append((f"{path}/edges", f"edge {eid!r} has unknown type {entry['type']!r}"))
    elif any("type" in e for e in list(seen_nodes.values()) + list(seen_edges.values())):
        errors.append((path or "/", "type fields need a type graph"))
    if errors:
        raise DocumentError(errors)

    graph = Graph.build(seen_nodes, {eid: (e["src"], e["tgt"]) for eid, e in seen_edges.items()})

    if typegraph is not None:
        typing = Morphism(graph, typegraph,
                          {nid: e["type"] for nid, e in seen_nodes.items()},
                          {eid: e["type"] for eid, e in seen_edges.items()})
        tgr = TypedGraph(graph, typegraph, typing)
        for eid, entry in seen_edges.items():
            et = entry["type"]
            if typegraph.src[et] != tgr.node_type(entry["src"]) or typegraph.tgt[et] != tgr.node_type(entry["tgt"]):
                errors.append((f"{path}/edges", f"edge {eid!r} type {et!r} does not match its endpoint types"))
        if errors:
            raise DocumentError(errors)
        return tgr
    if polarized:
        plus = {nid for nid, e in seen_nodes.items() if "+" in e.get("polarity", [])}
        minus = {nid for nid, e in seen_nodes.items() if "-" in e.get("polarity", [])}
        for eid, entry in seen_edges.items():
            if entry["src"] not in plus:
                errors.append((f"{path}/edges", f"edge {eid!r} leaves node {entry['src']!r} without + polarity"))
            if entry["tgt"] not in minus:
                errors.append((f"{path}/edges", f"edge {eid!r} enters node {entry['tgt']!r} without - polarity"))
        if errors:
            raise DocumentError(errors)
        return PolarizedGraph(graph, frozenset(plus), frozenset(minus))
    return graph


# -- morphisms ----------------------------------------------------------------


def morphism_doc(f: Morphism, with_objects: bool = False,
                 instance: Optional[CategoryInstance] = None) -> dict:
    """Serialize a morphism; with ``with_objects`` the endpoint graphs are
    embedded so the file stands alone."""
    doc = {
        "nodes": {k: f.nodemap[k] for k in sorted(f.nodemap)},
        "edges": {k: f.edgemap[k] for k in sorted(f.edgemap)},
    }
    if with_objects:
        doc["source"] = graph_doc(f.source)
        doc["target"] = graph_doc(f.target)
    return doc


def parse_morphism(doc, source=None, target=None, typegraph: Optional[Graph] = None,
                   path: str = "") -> Morphism:
    """Parse a MorphismDoc against known endpoints, or its embedded ones."""
    if not isinstance(doc, dict):
        raise DocumentError([(path or "/", "morphism document must be an object")])
    errors = []
    if source is None:
        if "source" not in doc:
            raise DocumentError([(f"{path}/source", "no source graph given or embedded")])
        source = parse_graph(doc["source"], typegraph, path=f"{path}/source")
    if target is None:
        if "target" not in doc:
            raise DocumentError([(f"{path}/target", "no target graph given or embedded")])
        target = parse_graph(doc["target"], typegraph, path=f"{path}/target")

    sg, tg = carrier(source), carrier(target)
    nodemap = doc.get("nodes", {})
    edgemap = doc.get("edges", {})
    for k, v in nodemap.items():
        if k not in sg.nodes:
            errors.append((f"{path}/nodes/{k}", f"unknown source node id {k!r}"))
        if v not in tg.nodes:
            errors.append((f"{path}/nodes/{k}", f"unknown target node id {v!r}"))
    for k, v in edgemap.items():
        if k not in sg.src:
            errors.append((f"{path}/edges/{k}", f"unknown source edge id {k!r}"))
        if v not in tg.src:
            errors.append((f"{path}/edges/{k}", f"unknown target edge id {v!r}"))
    if errors:
        raise DocumentError(errors)
    return Morphism(source, target, dict(nodemap), dict(edgemap))


# -- rules ---------------------------------------------------------------------


def rule_doc(rule: Rule, instance: CategoryInstance) -> dict:
    doc = {
        "mode": rule.mode,
        "L": graph_doc(rule.lhs),
        "K": graph_doc(rule.interface),
        "R": graph_doc(rule.rhs),
        "l": morphism_doc(rule.l),
        "r": morphism_doc(rule.r),
    }
    if rule.mode == "AGREE":
        doc["TK"] = graph_doc(rule.t.target)
        doc["t"] = morphism_doc(rule.t)
    if rule.mode == "PSQPO":
        doc["polarity"] = {"plus": sorted(rule.nplus), "minus": sorted(rule.nminus)}
    if instance.kind == "typed":
        doc["typegraph"] = graph_doc(instance.typegraph)
    return doc


def parse_rule(doc, path: str = ""):
    """Parse a RuleDoc; returns ``(rule, instance)``.

    Mode-dependent required fields mirror the rule invariants: ``AGREE``
    needs ``TK``/``t``, ``SQPO`` takes the span only, ``PSQPO`` needs a
    ``polarity`` block over plain graphs.
    """
    if not isinstance(doc, dict):
        raise DocumentError([(path or "/", "rule document must be an object")])
    mode = doc.get("mode")
    if mode not in ("AGREE", "SQPO", "PSQPO"):
        raise DocumentError([(f"{path}/mode", f"mode must be AGREE, SQPO or PSQPO, got {mode!r}")])
    for key in ("L", "K", "R", "l", "r"):
        if key not in doc:
            raise DocumentError([(f"{path}/{key}", "missing required field")])
    errors = []
    if mode == "AGREE":
        for key in ("TK", "t"):
            if key not in doc:
                errors.append((f"{path}/{key}", "AGREE rules need an explicit embedding"))
        if "polarity" in doc:
            errors.append((f"{path}/polarity", "polarity belongs to PSQPO rules"))
    else:
        for key in ("TK", "t"):
            if key in doc:
                errors.append((f"{path}/{key}", f"{mode} rules materialize their embedding; drop this field"))
        if mode == "PSQPO":
            if "polarity" not in doc:
                errors.append((f"{path}/polarity", "PSQPO rules need a polarity block"))
            if "typegraph" in doc:
                errors.append((f"{path}/typegraph", "PSQPO rules live over plain graphs"))
        elif "polarity" in doc:
            errors.append((f"{path}/polarity", "polarity belongs to PSQPO rules"))
    if errors:
        raise DocumentError(errors)

    typegraph = None
    instance = GR
    if "typegraph" in doc:
        typegraph = parse_graph(doc["typegraph"], path=f"{path}/typegraph")
        if not isinstance(typegraph, Graph):
            raise DocumentError([(f"{path}/typegraph", "the type graph must be a plain graph")])
        instance = typed_over(typegraph)

    lhs = parse_graph(doc["L"], typegraph, path=f"{path}/L")
    k = parse_graph(doc["K"], typegraph, path=f"{path}/K")
    rhs = parse_graph(doc["R"], typegraph, path=f"{path}/R")
    l = parse_morphism(doc["l"], source=k, target=lhs, path=f"{path}/l")
    r = parse_morphism(doc["r"], source=k, target=rhs, path=f"{path}/r")

    if mode == "AGREE":
        tk = parse_graph(doc["TK"], typegraph, path=f"{path}/TK")
        t = parse_morphism(doc["t"], source=k, target=tk, path=f"{path}/t")
        return agree_rule(l, r, t, instance), instance
    if mode == "SQPO":
        return sqpo_rule(l, r, instance), instance
    pol = doc["polarity"]
    kg = carrier(k)
    for key in ("plus", "minus"):
        for nid in pol.get(key, []):
            if nid not in kg.nodes:
                errors.append((f"{path}/polarity/{key}", f"unknown interface node {nid!r}"))
    if errors:
        raise DocumentError(errors)
    return psqpo_rule(l, r, pol.get("plus", []), pol.get("minus", [])), instance


# -- traces ---------------------------------------------------------------------


def trace_doc(trace: RewriteTrace, instance: CategoryInstance) -> dict:
    """Serialize every object and arrow a rewrite step constructed."""
    return {
        "mode": trace.rule.mode,
        "objects": {
            "L": graph_doc(trace.rule.lhs),
            "K": graph_doc(trace.rule.interface),
            "R": graph_doc(trace.rule.rhs),
            "TK": graph_doc(trace.rule.t.target),
            "G": graph_doc(trace.match.target),
            "D": graph_doc(trace.context),
            "H": graph_doc(trace.result),
            "TL": graph_doc(trace.m_bar.target),
        },
        "arrows": {
            "l": morphism_doc(trace.rule.l),
            "r": morphism_doc(trace.rule.r),
            "t": morphism_doc(trace.rule.t),
            "m": morphism_doc(trace.match),
            "l_prime": morphism_doc(trace.l_prime),
            "m_bar": morphism_doc(trace.m_bar),
            "g": morphism_doc(trace.g),
            "n_prime": morphism_doc(trace.n_prime),
            "n": morphism_doc(trace.n),
            "h": morphism_doc(trace.h),
            "p": morphism_doc(trace.p),
        },
    }


# -- DOT ---------------------------------------------------------------------


def _dot_node_attrs(obj, n: str) -> str:
    attrs = []
    if isinstance(obj, TypedGraph):
        attrs.append(f'label="{n}:{obj.typing.nodemap[n]}"')
    elif isinstance(obj, PolarizedGraph):
        pol = ("+" if n in obj.nplus else "") + ("-" if n in obj.nminus else "")
        attrs.append(f'label="{n}{pol}"')
    if n.startswith("*"):
        attrs.append("style=dashed")
    return f" [{', '.join(attrs)}]" if attrs else ""


def _dot_edge_attrs(obj, e: str) -> str:
    label = e
    if isinstance(obj, TypedGraph):
        label = f"{e}:{obj.typing.edgemap[e]}"
    attrs = [f'label="{label}"']
    if e.startswith("*"):
        attrs.append("style=dashed")
    return f" [{', '.join(attrs)}]"


def _graph_dot_lines(obj, prefix: str = "", indent: str = "  "):
    g = carrier(obj)
    lines = []
    for n in sorted(g.nodes):
        lines.append(f'{indent}"{prefix}{n}"{_dot_node_attrs(obj, n)};')
    for e in sorted(g.src):
        lines.append(
            f'{indent}"{prefix}{g.src[e]}" -> "{prefix}{g.tgt[e]}"{_dot_edge_attrs(obj, e)};'
        )
    return lines


_TRACE_OBJECTS = ("L", "K", "R", "TK", "G", "D", "H", "TL")
_TRACE_ARROWS = (
    ("l", "K", "L"),
    ("r", "K", "R"),
    ("t", "K", "TK"),
    ("n", "K", "D"),
    ("m", "L", "G"),
    ("m_bar", "G", "TL"),
    ("l_prime", "TK", "TL"),
    ("g", "D", "G"),
    ("n_prime", "D", "TK"),
    ("h", "D", "H"),
    ("p", "R", "H"),
)


def export_dot(x, instance: Optional[CategoryInstance] = None) -> str:
    """Deterministic DOT text for a graph object or a whole rewrite trace."""
    if isinstance(x, RewriteTrace):
        objs = {
            "L": x.rule.lhs, "K": x.rule.interface, "R": x.rule.rhs,
            "TK": x.rule.t.target, "G": x.match.target, "D": x.context,
            "H": x.result, "TL": x.m_bar.target,
        }
        lines = ["digraph trace {", "  compound=true;"]
        for name in _TRACE_OBJECTS:
            lines.append(f"  subgraph cluster_{name} {{")
            lines.append(f'    label="{name}";')
            lines.append(f'    "{name}.__anchor" [shape=point, style=invis];')
            lines.extend(_graph_dot_lines(objs[name], prefix=f"{name}.", indent="    "))
            lines.append("  }")
        for arrow, src, tgt in _TRACE_ARROWS:
            lines.append(
                f'  "{src}.__anchor" -> "{tgt}.__anchor"'
                f' [label="{arrow}", ltail=cluster_{src}, lhead=cluster_{tgt}];'
            )
        lines.append("}")
        return "\n".join(lines) + "\n"
    lines = ["digraph G {"]
    lines.extend(_graph_dot_lines(x))
    lines.append("}")
    return "\n".join(lines) + "\n"
