"""Concrete finite limit/colimit machinery with canonical naming.

Pullbacks name their elements ``(x,y)`` after the component pair, pushouts
prefix the two summands with ``D:`` and ``R:``.  These schemes are part of
the external contract so serialized outputs are stable and diffable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

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
    "Span",
    "Cospan",
    "SquareWitness",
    "Pullback",
    "Pushout",
    "Constants",
    "pullback",
    "pullback_mediator",
    "pushout_along_mono",
    "final_object",
    "initial_object",
    "bang",
    "zero",
    "constants",
    "is_pullback_square",
    "iso_search",
    "enumerate_morphisms",
    "enumerate_monos",
]


@dataclass(frozen=True)
class Span:
    """Two arrows out of a shared source."""

    left: Morphism
    right: Morphism

    def __post_init__(self):
        if self.left.source != self.right.source:
            raise PreconditionError("span legs must share their source")


@dataclass(frozen=True)
class Cospan:
    """Two arrows into a shared target."""

    left: Morphism
    right: Morphism

    def __post_init__(self):
        if self.left.target != self.right.target:
            raise PreconditionError("cospan legs must share their target")


@dataclass(frozen=True)
class SquareWitness:
    """A commuting square ``f . p = g . q`` with apex ``p.source``.

    ``p: W -> X``, ``q: W -> Y``, ``f: X -> Z``, ``g: Y -> Z``.
    """

    p: Morphism
    q: Morphism
    f: Morphism
    g: Morphism

    def commutes(self) -> bool:
        return compose(self.f, self.p) == compose(self.g, self.q)

    def is_pullback(self, instance: CategoryInstance) -> bool:
        return is_pullback_square(self.p, self.q, self.f, self.g, instance)


def _pair(a: str, b: str) -> str:
    return f"({a},{b})"


def _wrap(instance, graph, *, typing_nodes=None, typing_edges=None, nplus=None, nminus=None):
    if instance.kind == "gr":
        return graph
    if instance.kind == "typed":
        return TypedGraph(graph, instance.typegraph,
                          Morphism(graph, instance.typegraph, typing_nodes, typing_edges))
    return PolarizedGraph(graph, frozenset(nplus), frozenset(nminus))


def _checked(instance, source, target, nodemap, edgemap) -> Morphism:
    m = Morphism(source, target, nodemap, edgemap)
    rep = validate_morphism(m, instance)
    assert rep.valid, f"internal construction produced an invalid morphism: {rep.problems}"
    return m


@dataclass(frozen=True)
class Pullback:
    """Canonical pullback of a cospan ``f: X -> Z <- Y :g``."""

    apex: object
    p1: Morphism  # apex -> X
    p2: Morphism  # apex -> Y
    f: Morphism
    g: Morphism


def pullback(f: Morphism, g: Morphism, instance: CategoryInstance) -> Pullback:
    """Pullback object of componentwise pairs, with projections.

    Nodes are pairs ``(x,y)`` with equal images, edges likewise; typing is
    inherited through the first projection, polarity is the componentwise
    conjunction.  Pulling back an admissible mono yields an admissible mono.
    """
    if f.target != g.target:
        raise PreconditionError("pullback needs a cospan: the two arrows must share their target")
    require_object(f.source, instance)
    require_object(g.source, instance)
    gx, gy = carrier(f.source), carrier(g.source)

    node_ids = {}
    for x in sorted(gx.nodes):
        fx = f.nodemap[x]
        for y in sorted(gy.nodes):
            if fx == g.nodemap[y]:
                node_ids[(x, y)] = _pair(x, y)
    edge_ids = {}
    for e in sorted(gx.src):
        fe = f.edgemap[e]
        for d in sorted(gy.src):
            if fe == g.edgemap[d]:
                edge_ids[(e, d)] = _pair(e, d)
    if len(set(node_ids.values())) != len(node_ids) or len(set(edge_ids.values())) != len(edge_ids):
        raise StructuralError("pair naming collided; source ids embed ambiguous commas")

    src = {}
    tgt = {}
    for (e, d), eid in edge_ids.items():
        src[eid] = node_ids[(gx.src[e], gy.src[d])]
        tgt[eid] = node_ids[(gx.tgt[e], gy.tgt[d])]
    graph = Graph(frozenset(node_ids.values()), src, tgt)

    kw = {}
    if instance.kind == "typed":
        tx = f.source.typing
        kw["typing_nodes"] = {nid: tx.nodemap[x] for (x, _), nid in node_ids.items()}
        kw["typing_edges"] = {eid: tx.edgemap[e] for (e, _), eid in edge_ids.items()}
    elif instance.kind == "grpol":
        px, py = f.source, g.source
        kw["nplus"] = {nid for (x, y), nid in node_ids.items() if x in px.nplus and y in py.nplus}
        kw["nminus"] = {nid for (x, y), nid in node_ids.items() if x in px.nminus and y in py.nminus}
    apex = _wrap(instance, graph, **kw)

    p1 = _checked(instance, apex, f.source,
                  {nid: x for (x, _), nid in node_ids.items()},
                  {eid: e for (e, _), eid in edge_ids.items()})
    p2 = _checked(instance, apex, g.source,
                  {nid: y for (_, y), nid in node_ids.items()},
                  {eid: d for (_, d), eid in edge_ids.items()})
    if validate_morphism(g, instance).is_mono_in_M:
        assert validate_morphism(p1, instance).is_mono_in_M, "stability of admissible monos failed"
    return Pullback(apex, p1, p2, f, g)


def pullback_mediator(pb: Pullback, v: Morphism, w: Morphism) -> Morphism:
    """The unique arrow into the canonical pullback induced by a commuting cone."""
    if v.source != w.source:
        raise PreconditionError("cone legs must share their source")
    if v.target != pb.f.source or w.target != pb.g.source:
        raise PreconditionError("cone legs must land in the pullback's feet")
    if compose(pb.f, v) != compose(pb.g, w):
        raise PreconditionError("cone does not commute with the cospan")
    nodemap = {x: _pair(v.nodemap[x], w.nodemap[x]) for x in v.nodemap}
    edgemap = {e: _pair(v.edgemap[e], w.edgemap[e]) for e in v.edgemap}
    apex_nodes = carrier(pb.apex).nodes
    assert all(n in apex_nodes for n in nodemap.values())
    return Morphism(v.source, pb.apex, nodemap, edgemap)


@dataclass(frozen=True)
class Pushout:
    """Pushout of ``D <-n- K -r-> R`` along an admissible mono ``n``."""

    result: object
    h: Morphism  # D -> result
    p: Morphism  # R -> result


def pushout_along_mono(n: Morphism, r: Morphism, instance: CategoryInstance) -> Pushout:
    """Glue ``R`` into ``D`` over ``K``: kept context keeps a ``D:`` prefix,
    right-hand-side items enter with an ``R:`` prefix."""
    if instance.kind == "grpol":
        raise PreconditionError("pushouts are only provided for plain and typed graphs")
    if n.source != r.source:
        raise PreconditionError("pushout needs a span: the two arrows must share their source")
    if not validate_morphism(n, instance).is_mono_in_M:
        raise PreconditionError("pushout requires the first leg to be an admissible mono")
    gd, gr_ = carrier(n.target), carrier(r.target)

    n_nodes = set(n.nodemap.values())
    n_edges = set(n.edgemap.values())
    inv_n = {v: k for k, v in n.nodemap.items()}
    inv_e = {v: k for k, v in n.edgemap.items()}

    h_nodes = {x: f"D:{x}" if x not in n_nodes else f"R:{r.nodemap[inv_n[x]]}" for x in gd.nodes}
    p_nodes = {y: f"R:{y}" for y in gr_.nodes}
    nodes = {h_nodes[x] for x in gd.nodes if x not in n_nodes} | set(p_nodes.values())

    h_edges = {}
    src = {}
    tgt = {}
    for e in gd.src:
        if e in n_edges:
            h_edges[e] = f"R:{r.edgemap[inv_e[e]]}"
        else:
            eid = f"D:{e}"
            h_edges[e] = eid
            src[eid] = h_nodes[gd.src[e]]
            tgt[eid] = h_nodes[gd.tgt[e]]
    p_edges = {d: f"R:{d}" for d in gr_.src}
    for d in gr_.src:
        src[f"R:{d}"] = p_nodes[gr_.src[d]]
        tgt[f"R:{d}"] = p_nodes[gr_.tgt[d]]
    graph = Graph(frozenset(nodes), src, tgt)

    kw = {}
    if instance.kind == "typed":
        td, tr = n.target.typing, r.target.typing
        tn = {h_nodes[x]: td.nodemap[x] for x in gd.nodes if x not in n_nodes}
        tn.update({p_nodes[y]: tr.nodemap[y] for y in gr_.nodes})
        te = {f"D:{e}": td.edgemap[e] for e in gd.src if e not in n_edges}
        te.update({f"R:{d}": tr.edgemap[d] for d in gr_.src})
        kw = {"typing_nodes": tn, "typing_edges": te}
    result = _wrap(instance, graph, **kw)

    h = _checked(instance, n.target, result, h_nodes, h_edges)
    p = _checked(instance, r.target, result, p_nodes, p_edges)
    assert compose(h, n) == compose(p, r)
    return Pushout(result, h, p)


# -- constants ----------------------------------------------------------------

def final_object(instance: CategoryInstance):
    if instance.kind == "gr":
        return Graph.build(["1"], {"loop": ("1", "1")})
    if instance.kind == "typed":
        tg = instance.typegraph
        return TypedGraph(tg, tg, identity(tg))
    return PolarizedGraph(Graph.build(["1"], {"loop": ("1", "1")}), frozenset(["1"]), frozenset(["1"]))


def initial_object(instance: CategoryInstance):
    empty = Graph.build()
    if instance.kind == "gr":
        return empty
    if instance.kind == "typed":
        return TypedGraph(empty, instance.typegraph, Morphism(empty, instance.typegraph, {}, {}))
    return PolarizedGraph(empty, frozenset(), frozenset())


def bang(x, instance: CategoryInstance) -> Morphism:
    """The unique arrow into the final object."""
    require_object(x, instance)
    one = final_object(instance)
    if instance.kind == "typed":
        t = x.typing
        return Morphism(x, one, dict(t.nodemap), dict(t.edgemap))
    g = carrier(x)
    return Morphism(x, one, {n: "1" for n in g.nodes}, {e: "loop" for e in g.src})


def zero(x, instance: CategoryInstance) -> Morphism:
    """The unique arrow out of the initial object."""
    require_object(x, instance)
    return Morphism(initial_object(instance), x, {}, {})


@dataclass(frozen=True)
class Constants:
    final: object
    initial: object
    bang_is_in_M: bool
    instance: CategoryInstance

    def bang(self, x) -> Morphism:
        return bang(x, self.instance)

    def zero(self, x) -> Morphism:
        return zero(x, self.instance)


def constants(instance: CategoryInstance) -> Constants:
    one = final_object(instance)
    zero_to_one = zero(one, instance)
    return Constants(one, initial_object(instance),
                     validate_morphism(zero_to_one, instance).is_mono_in_M, instance)


# -- morphism enumeration ------------------------------------------------------

def _node_signature(g: Graph, n: str):
    out = sum(1 for e in g.src if g.src[e] == n)
    inc = sum(1 for e in g.src if g.tgt[e] == n)
    return (out, inc)


def _edge_candidates(gx, gy, e, nodemap, obj_x, obj_y, instance):
    fs, ft = nodemap[gx.src[e]], nodemap[gx.tgt[e]]
    out = [d for d in sorted(gy.src) if gy.src[d] == fs and gy.tgt[d] == ft]
    if instance.kind == "typed":
        et = obj_x.typing.edgemap[e]
        out = [d for d in out if obj_y.typing.edgemap[d] == et]
    return out


def _node_ok(x, y, obj_x, obj_y, instance, mode):
    if instance.kind == "typed":
        if obj_x.typing.nodemap[x] != obj_y.typing.nodemap[y]:
            return False
    elif instance.kind == "grpol":
        if mode == "any":
            if x in obj_x.nplus and y not in obj_y.nplus:
                return False
            if x in obj_x.nminus and y not in obj_y.nminus:
                return False
        else:  # strict membership match, as required of admissible monos
            if (x in obj_x.nplus) != (y in obj_y.nplus) or (x in obj_x.nminus) != (y in obj_y.nminus):
                return False
    return True


def _enumerate(obj_x, obj_y, instance, *, injective: bool, mode: str) -> Iterator[Morphism]:
    gx, gy = carrier(obj_x), carrier(obj_y)
    xs = sorted(gx.nodes)
    ys = sorted(gy.nodes)
    sig_y = {y: _node_signature(gy, y) for y in ys}

    cand = {}
    for x in xs:
        sx = _node_signature(gx, x)
        ok = []
        for y in ys:
            if not _node_ok(x, y, obj_x, obj_y, instance, mode):
                continue
            if injective and (sig_y[y][0] < sx[0] or sig_y[y][1] < sx[1]):
                continue
            ok.append(y)
        cand[x] = ok

    es = sorted(gx.src)

    def assign_edges(i, nodemap, edgemap, used_edges):
        if i == len(es):
            yield Morphism(obj_x, obj_y, dict(nodemap), dict(edgemap))
            return
        e = es[i]
        for d in _edge_candidates(gx, gy, e, nodemap, obj_x, obj_y, instance):
            if injective and d in used_edges:
                continue
            edgemap[e] = d
            used_edges.add(d)
            yield from assign_edges(i + 1, nodemap, edgemap, used_edges)
            used_edges.discard(d)
            del edgemap[e]

    def assign_nodes(i, nodemap, used):
        if i == len(xs):
            yield from assign_edges(0, nodemap, {}, set())
            return
        x = xs[i]
        for y in cand[x]:
            if injective and y in used:
                continue
            nodemap[x] = y
            used.add(y)
            yield from assign_nodes(i + 1, nodemap, used)
            used.discard(y)
            del nodemap[x]

    yield from assign_nodes(0, {}, set())


def enumerate_morphisms(x, y, instance: CategoryInstance) -> Iterator[Morphism]:
    """All instance-valid morphisms ``x -> y`` in a deterministic order."""
    require_object(x, instance)
    require_object(y, instance)
    return _enumerate(x, y, instance, injective=False, mode="any")


def enumerate_monos(x, y, instance: CategoryInstance) -> Iterator[Morphism]:
    """All admissible monos ``x -> y`` (strict ones for polarized graphs)."""
    require_object(x, instance)
    require_object(y, instance)
    mode = "strict" if instance.kind == "grpol" else "any"
    return _enumerate(x, y, instance, injective=True, mode=mode)


def iso_search(x, y, instance: CategoryInstance) -> Optional[Morphism]:
    """An instance-valid isomorphism ``x -> y`` if one exists, else ``None``.

    Deterministic for fixed inputs: the backtracking explores candidates in
    sorted id order and returns the first hit.
    """
    require_object(x, instance)
    require_object(y, instance)
    gx, gy = carrier(x), carrier(y)
    if len(gx.nodes) != len(gy.nodes) or len(gx.src) != len(gy.src):
        return None
    if instance.kind == "grpol" and (len(x.nplus) != len(y.nplus) or len(x.nminus) != len(y.nminus)):
        return None
    for m in enumerate_monos(x, y, instance):
        rep = validate_morphism(m, instance)
        if rep.is_iso:
            return m
    return None


def is_pullback_square(p: Morphism, q: Morphism, f: Morphism, g: Morphism,
                       instance: CategoryInstance) -> bool:
    """Whether the commuting square ``f . p = g . q`` is a pullback.

    Decided by comparison with the canonical pullback: the induced mediator
    from the apex must be an isomorphism.
    """
    for arrow in (p, q, f, g):
        rep = validate_morphism(arrow, instance)
        if not rep.valid:
            raise PreconditionError(f"square contains an invalid morphism: {rep.problems}")
    if p.source != q.source or p.target != f.source or q.target != g.source:
        raise PreconditionError("square arrows do not fit together")
    if compose(f, p) != compose(g, q):
        raise PreconditionError("square does not commute")
    pb = pullback(f, g, instance)
    z = pullback_mediator(pb, p, q)
    return validate_morphism(z, instance).is_iso
