"""Partial-map classifiers for the three instances.

``t_object`` adds to an object a "star" part that can absorb everything a
partial map is undefined on: one star node (one per type for typed graphs)
and one star edge for every way an absorbed edge could sit between the
enlarged node set.  ``phi`` turns a partial map, given as a span of an
admissible mono and an arrow, into the unique total arrow into the
enlarged target that restricts back to it.

Star item ids are normative: node ``*`` (typed: ``*:<type>``), edge
``*(<src>,<tgt>)`` (typed: ``*(<src>,<tgt>):<type>``).
"""

from __future__ import annotations

from dataclasses import dataclass

from .catops import bang, final_object, initial_object, zero
from .core import (
    CategoryInstance,
    Graph,
    Morphism,
    PolarizedGraph,
    TypedGraph,
    carrier,
    compose,
    identity,
    require_object,
    validate_morphism,
)
from .errors import PreconditionError, StructuralError

__all__ = [
    "ClassifiedObject",
    "Characteristic",
    "t_object",
    "t_morphism",
    "phi",
    "bar",
    "characteristic",
]


@dataclass(frozen=True)
class ClassifiedObject:
    """An object, its enlargement, the embedding unit, and the star index.

    ``star_edge_ends`` maps each added edge id to ``(src, tgt, type)`` over
    the enlarged node set (``type`` is ``None`` outside the typed instance).
    """

    base: object
    total: object
    unit: Morphism
    star_nodes: frozenset
    star_edges: frozenset
    star_edge_ends: dict


def _star_edge_id(n: str, p: str, etype=None) -> str:
    return f"*({n},{p})" if etype is None else f"*({n},{p}):{etype}"


def t_object(y, instance: CategoryInstance) -> ClassifiedObject:
    """Enlarge ``y`` with its star part; the unit is the evident inclusion."""
    require_object(y, instance)
    g = carrier(y)

    if instance.kind == "typed":
        tg = instance.typegraph
        star_nodes = {f"*:{t}": t for t in sorted(tg.nodes)}
        if star_nodes.keys() & g.nodes:
            raise StructuralError("base graph already uses a reserved star node id")
        pool = {n: y.typing.nodemap[n] for n in g.nodes}
        pool.update(star_nodes)
        ends = {}
        for n in sorted(pool):
            for p in sorted(pool):
                for et in sorted(tg.src):
                    if tg.src[et] == pool[n] and tg.tgt[et] == pool[p]:
                        ends[_star_edge_id(n, p, et)] = (n, p, et)
    else:
        if "*" in g.nodes:
            raise StructuralError("base graph already uses the reserved star node id")
        star_nodes = {"*": None}
        if instance.kind == "grpol":
            plus = sorted(y.nplus) + ["*"]
            minus = sorted(y.nminus) + ["*"]
        else:
            plus = minus = sorted(g.nodes) + ["*"]
        ends = {_star_edge_id(n, p): (n, p, None) for n in plus for p in minus}

    if ends.keys() & g.edges:
        raise StructuralError("base graph already uses a reserved star edge id")

    src = dict(g.src)
    tgt = dict(g.tgt)
    for eid, (n, p, _) in ends.items():
        src[eid] = n
        tgt[eid] = p
    graph = Graph(g.nodes | set(star_nodes), src, tgt)

    if instance.kind == "typed":
        tn = dict(y.typing.nodemap)
        tn.update(star_nodes)
        te = dict(y.typing.edgemap)
        te.update({eid: et for eid, (_, _, et) in ends.items()})
        total = TypedGraph(graph, instance.typegraph, Morphism(graph, instance.typegraph, tn, te))
    elif instance.kind == "grpol":
        total = PolarizedGraph(graph, y.nplus | {"*"}, y.nminus | {"*"})
    else:
        total = graph

    unit = Morphism(y, total, {n: n for n in g.nodes}, {e: e for e in g.src})
    rep = validate_morphism(unit, instance)
    assert rep.is_mono_in_M
    return ClassifiedObject(y, total, unit, frozenset(star_nodes), frozenset(ends), ends)


def t_morphism(f: Morphism, instance: CategoryInstance) -> Morphism:
    """Functorial action on arrows: originals map by ``f``, stars to stars."""
    rep = validate_morphism(f, instance)
    if not rep.valid:
        raise PreconditionError(f"t_morphism needs a valid morphism: {rep.problems}")
    cx = t_object(f.source, instance)
    cy = t_object(f.target, instance)

    hat = dict(f.nodemap)
    hat.update({s: s for s in cx.star_nodes})
    lookup = {ends: eid for eid, ends in cy.star_edge_ends.items()}

    nodemap = dict(hat)
    edgemap = dict(f.edgemap)
    for eid, (n, p, et) in cx.star_edge_ends.items():
        edgemap[eid] = lookup[(hat[n], hat[p], et)]
    out = Morphism(cx.total, cy.total, nodemap, edgemap)
    assert validate_morphism(out, instance).valid
    return out


def phi(m: Morphism, f: Morphism, instance: CategoryInstance) -> Morphism:
    """The unique total arrow classifying the partial map ``(m, f)``.

    ``m: X >-> Z`` must be an admissible mono and ``f: X -> Y`` must share
    its source.  Items of ``Z`` hit by ``m`` map through ``f``; everything
    else is absorbed by the star part of the enlarged ``Y``.
    """
    if m.source != f.source:
        raise PreconditionError("phi needs a span: m and f must share their source")
    if not validate_morphism(m, instance).is_mono_in_M:
        raise PreconditionError("phi requires an admissible mono as first leg")
    rep = validate_morphism(f, instance)
    if not rep.valid:
        raise PreconditionError(f"phi requires a valid second leg: {rep.problems}")

    cy = t_object(f.target, instance)
    gz = carrier(m.target)
    inv_n = {v: k for k, v in m.nodemap.items()}
    inv_e = {v: k for k, v in m.edgemap.items()}
    lookup = {ends: eid for eid, ends in cy.star_edge_ends.items()}

    nodemap = {}
    for z in gz.nodes:
        if z in inv_n:
            nodemap[z] = f.nodemap[inv_n[z]]
        elif instance.kind == "typed":
            nodemap[z] = f"*:{m.target.typing.nodemap[z]}"
        else:
            nodemap[z] = "*"
    edgemap = {}
    for e in gz.src:
        if e in inv_e:
            edgemap[e] = f.edgemap[inv_e[e]]
        else:
            et = m.target.typing.edgemap[e] if instance.kind == "typed" else None
            edgemap[e] = lookup[(nodemap[gz.src[e]], nodemap[gz.tgt[e]], et)]
    out = Morphism(m.target, cy.total, nodemap, edgemap)
    assert validate_morphism(out, instance).valid
    return out


def bar(m: Morphism, instance: CategoryInstance) -> Morphism:
    """Classify the subobject ``m`` itself: ``phi(m, id)``."""
    return phi(m, identity(m.source), instance)


@dataclass(frozen=True)
class Characteristic:
    chi: Morphism       # G -> T(1)
    true_pt: Morphism   # 1 -> T(1)
    false_pt: Morphism  # 1 -> T(1)


def characteristic(m: Morphism, instance: CategoryInstance) -> Characteristic:
    """Characteristic arrow of an admissible mono, with the two points of T(1).

    ``true`` is the unit at the final object; ``false`` routes through the
    enlargement of the initial object, which is itself final.
    """
    chi = phi(m, bang(m.source, instance), instance)
    one = final_object(instance)
    c_one = t_object(one, instance)
    c_zero = t_object(initial_object(instance), instance)

    b = bang(c_zero.total, instance)
    rep = validate_morphism(b, instance)
    assert rep.is_iso, "the enlarged initial object must be final"
    b_inv = Morphism(one, c_zero.total,
                     {v: k for k, v in b.nodemap.items()},
                     {v: k for k, v in b.edgemap.items()})
    false_pt = compose(t_morphism(zero(one, instance), instance), b_inv)
    return Characteristic(chi, c_one.unit, false_pt)
