"""Seeded random verification of the engine's structural laws.

Each law draws a stream of small random instances, evaluates one concrete
property per instance, and reports pass/fail together with the first
counterexample in re-checkable serialized form.  All generation is
deterministic in the seed; bounds are part of every report.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from . import io as docio
from .catops import (
    enumerate_morphisms,
    initial_object,
    is_pullback_square,
    iso_search,
    pullback,
    pullback_mediator,
    pushout_along_mono,
)
from .classifier import bar, phi, t_morphism, t_object
from .core import (
    GR,
    GRPOL,
    CategoryInstance,
    Graph,
    Morphism,
    PolarizedGraph,
    TypedGraph,
    carrier,
    compose,
    typed_over,
    validate_morphism,
)
from .errors import PreconditionError, UnknownLawError
from .rewrite import (
    Rule,
    agree_rule,
    agree_step,
    fpbc,
    fpbc_verify,
    is_local_rule,
    is_local_step,
    psqpo_rule,
    psqpo_step,
    sqpo_rule,
    strict_complement,
    complement_of_square,
)

__all__ = ["LAW_IDS", "LawReport", "run_law", "generate", "DEFAULT_TYPEGRAPH", "default_instance"]

LAW_IDS = (
    "ETA_CARTESIAN",
    "PHI_UNIQUE",
    "PHI_DECOMP",
    "COMPLEMENT_T0",
    "COMPLEMENT_TL_ISO",
    "LOCALITY",
    "FPBC_FINAL",
    "SQPO_AGREE",
    "PSQPO_AGREE",
    "COUNIT_ISO",
)

_DEFAULT_COUNTS = {
    "ETA_CARTESIAN": 200,
    "PHI_UNIQUE": 200,
    "PHI_DECOMP": 200,
    "COMPLEMENT_T0": 200,
    "COMPLEMENT_TL_ISO": 200,
    "LOCALITY": 100,
    "FPBC_FINAL": 30,
    "SQPO_AGREE": 100,
    "PSQPO_AGREE": 100,
    "COUNIT_ISO": 200,
}

DEFAULT_TYPEGRAPH = Graph.build(
    ["tn", "tm"], {"te": ("tn", "tn"), "tf": ("tn", "tm"), "tg": ("tm", "tm")}
)


def default_instance(kind: str) -> CategoryInstance:
    """The instance a CLI category name refers to."""
    if kind in ("gr", "GR"):
        return GR
    if kind in ("typed", "TYPED"):
        return typed_over(DEFAULT_TYPEGRAPH)
    if kind in ("pol", "grpol", "GRPOL"):
        return GRPOL
    raise PreconditionError(f"unknown category name {kind!r}")


@dataclass(frozen=True)
class LawReport:
    law: str
    instance: str
    count: int
    passed: bool
    failures: int
    first_counterexample: Optional[dict]
    seed: int
    size_bound: tuple


def _norm_bound(size_bound) -> tuple:
    if isinstance(size_bound, int):
        return (size_bound, size_bound + 1 if size_bound else 0)
    nmax, emax = size_bound
    return (int(nmax), int(emax))


class _Gen:
    """Deterministic random values for one law run."""

    def __init__(self, rng: random.Random, bound: tuple, instance: CategoryInstance):
        self.rng = rng
        self.nmax, self.emax = bound
        self.instance = instance

    # -- plain building blocks ------------------------------------------------

    def _graph(self, prefix, nmax, emax):
        rng = self.rng
        n = rng.randint(0, nmax)
        nodes = [f"{prefix}{i}" for i in range(n)]
        edges = {}
        if n:
            for i in range(rng.randint(0, emax)):
                edges[f"{prefix}e{i}"] = (rng.choice(nodes), rng.choice(nodes))
        return Graph.build(nodes, edges)

    def _typed(self, prefix, nmax, emax):
        rng = self.rng
        tg = self.instance.typegraph
        types = sorted(tg.nodes)
        etypes = sorted(tg.src)
        n = rng.randint(0, nmax)
        nodes = [f"{prefix}{i}" for i in range(n)]
        node_types = {x: rng.choice(types) for x in nodes}
        edges = {}
        edge_types = {}
        if n and etypes:
            for i in range(rng.randint(0, emax)):
                et = rng.choice(etypes)
                srcs = [x for x in nodes if node_types[x] == tg.src[et]]
                tgts = [x for x in nodes if node_types[x] == tg.tgt[et]]
                if not srcs or not tgts:
                    continue
                eid = f"{prefix}e{i}"
                edges[eid] = (rng.choice(srcs), rng.choice(tgts))
                edge_types[eid] = et
        graph = Graph.build(nodes, edges)
        return TypedGraph(graph, tg, Morphism(graph, tg, node_types, edge_types))

    def _pol(self, prefix, nmax, emax):
        rng = self.rng
        g = self._graph(prefix, nmax, emax)
        plus = set(g.src.values())
        minus = set(g.tgt.values())
        for x in sorted(g.nodes):
            if rng.random() < 0.4:
                plus.add(x)
            if rng.random() < 0.4:
                minus.add(x)
        return PolarizedGraph(g, frozenset(plus), frozenset(minus))

    def object(self, prefix="n", nmax=None, emax=None):
        nmax = self.nmax if nmax is None else nmax
        emax = self.emax if emax is None else emax
        if self.instance.kind == "typed":
            return self._typed(prefix, nmax, emax)
        if self.instance.kind == "grpol":
            return self._pol(prefix, nmax, emax)
        return self._graph(prefix, nmax, emax)

    # -- morphisms -------------------------------------------------------------

    def mono(self, target=None, prefix="x"):
        """An admissible mono onto a random subobject of ``target``."""
        rng = self.rng
        if target is None:
            target = self.object("z")
        g = carrier(target)
        kept_nodes = sorted(x for x in g.nodes if rng.random() < 0.6)
        kept_set = set(kept_nodes)
        kept_edges = sorted(
            e for e in g.src
            if g.src[e] in kept_set and g.tgt[e] in kept_set and rng.random() < 0.7
        )
        nmap = {x: f"{prefix}{i}" for i, x in enumerate(kept_nodes)}
        emap = {e: f"{prefix}e{i}" for i, e in enumerate(kept_edges)}
        sub = Graph.build(nmap.values(), {emap[e]: (nmap[g.src[e]], nmap[g.tgt[e]]) for e in kept_edges})
        if self.instance.kind == "typed":
            src_obj = TypedGraph(sub, self.instance.typegraph, Morphism(
                sub, self.instance.typegraph,
                {nmap[x]: target.typing.nodemap[x] for x in kept_nodes},
                {emap[e]: target.typing.edgemap[e] for e in kept_edges}))
        elif self.instance.kind == "grpol":
            src_obj = PolarizedGraph(
                sub,
                frozenset(nmap[x] for x in kept_nodes if x in target.nplus),
                frozenset(nmap[x] for x in kept_nodes if x in target.nminus))
        else:
            src_obj = sub
        m = Morphism(src_obj, target, {v: k for k, v in nmap.items()}, {v: k for k, v in emap.items()})
        assert validate_morphism(m, self.instance).is_mono_in_M
        return m

    def arrow_into(self, target, prefix="x", nmax=None, emax=None):
        """A random morphism into ``target`` from a freshly built source."""
        rng = self.rng
        nmax = self.nmax if nmax is None else nmax
        emax = self.emax if emax is None else emax
        g = carrier(target)
        tnodes = sorted(g.nodes)
        n = rng.randint(0, nmax) if tnodes else 0
        nodes = [f"{prefix}{i}" for i in range(n)]
        nodemap = {x: rng.choice(tnodes) for x in nodes}
        edges = {}
        edgemap = {}
        tedges = sorted(g.src)
        if nodes and tedges:
            for i in range(rng.randint(0, emax)):
                d = rng.choice(tedges)
                srcs = [x for x in nodes if nodemap[x] == g.src[d]]
                tgts = [x for x in nodes if nodemap[x] == g.tgt[d]]
                if not srcs or not tgts:
                    continue
                eid = f"{prefix}e{i}"
                edges[eid] = (rng.choice(srcs), rng.choice(tgts))
                edgemap[eid] = d
        graph = Graph.build(nodes, edges)
        if self.instance.kind == "typed":
            src_obj = TypedGraph(graph, self.instance.typegraph, Morphism(
                graph, self.instance.typegraph,
                {x: target.typing.nodemap[nodemap[x]] for x in nodes},
                {e: target.typing.edgemap[edgemap[e]] for e in edges}))
        elif self.instance.kind == "grpol":
            plus = set(graph.src.values())
            minus = set(graph.tgt.values())
            for x in nodes:
                if nodemap[x] in target.nplus and rng.random() < 0.5:
                    plus.add(x)
                if nodemap[x] in target.nminus and rng.random() < 0.5:
                    minus.add(x)
            src_obj = PolarizedGraph(graph, frozenset(plus), frozenset(minus))
        else:
            src_obj = graph
        f = Morphism(src_obj, target, nodemap, edgemap)
        assert validate_morphism(f, self.instance).valid
        return f

    def morphism(self):
        target = self.object("y")
        return self.arrow_into(target, "x")

    def partial_map(self):
        """A span ``(m: X >-> Z, f: X -> Y)`` over a shared source."""
        m = self.mono(prefix="x")
        f = self._map_from(m.source, "y")
        return m, f

    def _map_from(self, source, prefix):
        """A morphism out of a fixed source into a fresh target, extending the
        target as needed so the map can be total."""
        rng = self.rng
        target = self.object(prefix)
        g = carrier(source)
        tg = carrier(target)
        nodes = set(tg.nodes)
        edges = dict(tg.src)
        tgts = dict(tg.tgt)
        node_types = dict(target.typing.nodemap) if self.instance.kind == "typed" else None
        edge_types = dict(target.typing.edgemap) if self.instance.kind == "typed" else None
        plus = set(target.nplus) if self.instance.kind == "grpol" else None
        minus = set(target.nminus) if self.instance.kind == "grpol" else None

        nodemap = {}
        for i, x in enumerate(sorted(g.nodes)):
            cands = sorted(nodes)
            if self.instance.kind == "typed":
                want = source.typing.nodemap[x]
                cands = [y for y in cands if node_types[y] == want]
            if cands and rng.random() < 0.8:
                y = rng.choice(cands)
            else:
                y = f"{prefix}fresh{i}"
                nodes.add(y)
                if node_types is not None:
                    node_types[y] = source.typing.nodemap[x]
            nodemap[x] = y
            if plus is not None:
                if x in source.nplus:
                    plus.add(y)
                if x in source.nminus:
                    minus.add(y)
        edgemap = {}
        for i, e in enumerate(sorted(g.src)):
            u, v = nodemap[g.src[e]], nodemap[g.tgt[e]]
            want = source.typing.edgemap[e] if self.instance.kind == "typed" else None
            cands = sorted(
                d for d in edges
                if edges[d] == u and tgts[d] == v and (want is None or edge_types[d] == want)
            )
            if cands and rng.random() < 0.8:
                d = rng.choice(cands)
            else:
                d = f"{prefix}freshe{i}"
                edges[d] = u
                tgts[d] = v
                if edge_types is not None:
                    edge_types[d] = want
                if plus is not None:
                    plus.add(u)
                    minus.add(v)
            edgemap[e] = d

        graph = Graph(frozenset(nodes), edges, tgts)
        if self.instance.kind == "typed":
            target = TypedGraph(graph, self.instance.typegraph,
                                Morphism(graph, self.instance.typegraph, node_types, edge_types))
        elif self.instance.kind == "grpol":
            target = PolarizedGraph(graph, frozenset(plus), frozenset(minus))
        else:
            target = graph
        f = Morphism(source, target, nodemap, edgemap)
        assert validate_morphism(f, self.instance).valid
        return f

    def match_onto(self, lhs, extra_nodes=None, extra_edges=None):
        """An admissible mono from ``lhs`` into a larger random host."""
        rng = self.rng
        extra_nodes = rng.randint(0, 2) if extra_nodes is None else extra_nodes
        extra_edges = rng.randint(0, 2) if extra_edges is None else extra_edges
        g = carrier(lhs)
        nmap = {x: f"g{i}" for i, x in enumerate(sorted(g.nodes))}
        emap = {e: f"ge{i}" for i, e in enumerate(sorted(g.src))}
        nodes = set(nmap.values())
        edges = {emap[e]: nmap[g.src[e]] for e in g.src}
        tgts = {emap[e]: nmap[g.tgt[e]] for e in g.src}
        node_types = (
            {nmap[x]: lhs.typing.nodemap[x] for x in g.nodes}
            if self.instance.kind == "typed" else None
        )
        edge_types = (
            {emap[e]: lhs.typing.edgemap[e] for e in g.src}
            if self.instance.kind == "typed" else None
        )
        plus = {nmap[x] for x in lhs.nplus} if self.instance.kind == "grpol" else None
        minus = {nmap[x] for x in lhs.nminus} if self.instance.kind == "grpol" else None

        types = sorted(self.instance.typegraph.nodes) if self.instance.kind == "typed" else None
        fresh = []
        for i in range(extra_nodes):
            y = f"gx{i}"
            nodes.add(y)
            fresh.append(y)
            if node_types is not None:
                node_types[y] = rng.choice(types)
            if plus is not None:
                if rng.random() < 0.6:
                    plus.add(y)
                if rng.random() < 0.6:
                    minus.add(y)

        for i in range(extra_edges):
            if self.instance.kind == "typed":
                tg = self.instance.typegraph
                etypes = sorted(tg.src)
                if not etypes:
                    break
                et = rng.choice(etypes)
                srcs = [y for y in nodes if node_types[y] == tg.src[et]]
                tgs = [y for y in nodes if node_types[y] == tg.tgt[et]]
            elif self.instance.kind == "grpol":
                # Adding polarity to a matched node would break strictness,
                # so new edges only touch nodes that already carry it.
                srcs = sorted(plus)
                tgs = sorted(minus)
                et = None
            else:
                srcs = sorted(nodes)
                tgs = sorted(nodes)
                et = None
            if not srcs or not tgs:
                continue
            eid = f"gxe{i}"
            edges[eid] = rng.choice(srcs)
            tgts[eid] = rng.choice(tgs)
            if edge_types is not None:
                edge_types[eid] = et

        graph = Graph(frozenset(nodes), edges, tgts)
        if self.instance.kind == "typed":
            host = TypedGraph(graph, self.instance.typegraph,
                              Morphism(graph, self.instance.typegraph, node_types, edge_types))
        elif self.instance.kind == "grpol":
            host = PolarizedGraph(graph, frozenset(plus), frozenset(minus))
        else:
            host = graph
        m = Morphism(lhs, host, dict(nmap), dict(emap))
        assert validate_morphism(m, self.instance).is_mono_in_M
        return m

    # -- rules ------------------------------------------------------------------

    def span_rule(self) -> Rule:
        k = self.object("k", nmax=max(1, self.nmax - 1), emax=max(0, self.emax - 2))
        l = self._map_from(k, "l")
        r = self._map_from(k, "r")
        return sqpo_rule(l, r, self.instance)

    def psqpo_rule(self) -> Rule:
        if self.instance.kind != "gr":
            raise PreconditionError("polarized rules are generated over plain graphs")
        k = self._graph("k", max(1, self.nmax - 1), max(0, self.emax - 2))
        l = self._map_from(k, "l")
        r = self._map_from(k, "r")
        plus = set(k.src.values())
        minus = set(k.tgt.values())
        for x in sorted(k.nodes):
            if self.rng.random() < 0.5:
                plus.add(x)
            if self.rng.random() < 0.5:
                minus.add(x)
        return psqpo_rule(l, r, plus, minus)

    def local_rule(self) -> Rule:
        """A random rule whose embedding leaves the star part intact up to iso:
        exactly one absorbing node with its loop(s), plus arbitrary extra
        edges touching the interface."""
        rng = self.rng
        k = self.object("k", nmax=max(1, self.nmax - 2), emax=max(0, self.emax - 3))
        g = carrier(k)
        if self.instance.kind == "typed":
            tg = self.instance.typegraph
            star_nodes = {f"s{t}": t for t in sorted(tg.nodes)}
            nodes = set(g.nodes) | set(star_nodes)
            edges = dict(g.src)
            tgts = dict(g.tgt)
            node_types = dict(k.typing.nodemap)
            node_types.update(star_nodes)
            edge_types = dict(k.typing.edgemap)
            inv = {t: s for s, t in star_nodes.items()}
            for et in sorted(tg.src):
                eid = f"s{et}"
                edges[eid] = inv[tg.src[et]]
                tgts[eid] = inv[tg.tgt[et]]
                edge_types[eid] = et
            for i in range(rng.randint(0, 2)):
                et = rng.choice(sorted(tg.src))
                srcs = [x for x in g.nodes if node_types[x] == tg.src[et]]
                tgs = [x for x in nodes if node_types[x] == tg.tgt[et]]
                if not srcs or not tgs:
                    continue
                eid = f"kx{i}"
                edges[eid] = rng.choice(srcs)
                tgts[eid] = rng.choice(tgs)
                edge_types[eid] = et
            graph = Graph(frozenset(nodes), edges, tgts)
            tk = TypedGraph(graph, tg, Morphism(graph, tg, node_types, edge_types))
        else:
            nodes = set(g.nodes) | {"s"}
            edges = dict(g.src)
            tgts = dict(g.tgt)
            edges["sloop"] = "s"
            tgts["sloop"] = "s"
            knodes = sorted(g.nodes)
            for i in range(rng.randint(0, 2) if knodes else 0):
                src = rng.choice(knodes + ["s"])
                tgt = rng.choice(knodes) if src == "s" or rng.random() < 0.5 else "s"
                edges[f"kx{i}"] = src
                tgts[f"kx{i}"] = tgt
            tk = Graph(frozenset(nodes), edges, tgts)
        t = Morphism(k, tk, {x: x for x in g.nodes}, {e: e for e in g.src})
        l = self._map_from(k, "l")
        r = self._map_from(k, "r")
        return agree_rule(l, r, t, self.instance)

    def fpbc_pair(self):
        """A left-hand side and match small enough for the bounded finality
        oracle; instances whose complement exceeds 4 nodes or 4 edges are
        redrawn so the default bound stays at desk scale."""
        for _ in range(200):
            lhs = self.object("l", nmax=2, emax=2)
            l = self.arrow_into(lhs, "k", nmax=3, emax=2)
            m = self.match_onto(lhs, extra_nodes=self.rng.randint(0, 1),
                                extra_edges=self.rng.randint(0, 2))
            fp = fpbc(l, m, self.instance)
            gd = carrier(fp.context)
            if len(gd.nodes) <= 4 and len(gd.src) <= 4:
                return l, m
        raise PreconditionError("could not draw a desk-scale fpbc instance")


# -- individual laws --------------------------------------------------------------


def _ser_morphism(f, instance):
    return docio.morphism_doc(f, with_objects=True, instance=instance)


def _law_eta_cartesian(gen, instance, inject):
    f = inject if inject is not None else gen.morphism()
    cx = t_object(f.source, instance)
    cy = t_object(f.target, instance)
    ok = is_pullback_square(f, cx.unit, cy.unit, t_morphism(f, instance), instance)
    return ok, {"f": _ser_morphism(f, instance)}


def _law_phi_unique(gen, instance, inject):
    m, f = inject if inject is not None else gen.partial_map()
    cy = t_object(f.target, instance)
    ph = phi(m, f, instance)
    ok = is_pullback_square(f, m, cy.unit, ph, instance)
    z = carrier(m.target)
    y = carrier(f.target)
    if ok and len(z.nodes) <= 3 and len(y.nodes) <= 2:
        # Exhaustive uniqueness at desk scale: a competing arrow is a
        # pullback iff it commutes and the unit part pulls back onto the
        # image of m exactly.
        m_nodes = set(m.nodemap.values())
        m_edges = set(m.edgemap.values())
        unit_f = compose(cy.unit, f)
        hits = 0
        for psi in enumerate_morphisms(m.target, cy.total, instance):
            if compose(psi, m) != unit_f:
                continue
            pre_nodes = {x for x, v in psi.nodemap.items() if v in y.nodes}
            pre_edges = {e for e, v in psi.edgemap.items() if v in set(y.src)}
            if pre_nodes == m_nodes and pre_edges == m_edges:
                hits += 1
                if psi != ph:
                    ok = False
        ok = ok and hits == 1
    return ok, {"m": _ser_morphism(m, instance), "f": _ser_morphism(f, instance)}


def _law_phi_decomp(gen, instance, inject):
    m, f = gen.partial_map()
    ok = compose(t_morphism(f, instance), bar(m, instance)) == phi(m, f, instance)
    w = gen.object("w")
    n = gen.mono(target=w, prefix="y")
    g = gen.arrow_into(w, "z")
    pb = pullback(g, n, instance)
    ok = ok and phi(pb.p1, pb.p2, instance) == compose(bar(n, instance), g)
    return ok, {"m": _ser_morphism(m, instance), "f": _ser_morphism(f, instance),
                "n": _ser_morphism(n, instance), "g": _ser_morphism(g, instance)}


def _law_complement_t0(gen, instance, inject):
    obj = inject if inject is not None else gen.object("l")
    comp, _ = strict_complement(t_object(obj, instance).unit, instance)
    t0 = t_object(initial_object(instance), instance).total
    ok = iso_search(comp, t0, instance) is not None
    return ok, {"object": docio.graph_doc(obj)}


def _law_complement_tl_iso(gen, instance, inject):
    l = inject if inject is not None else gen.morphism()
    unit_k = t_object(l.source, instance).unit
    unit_l = t_object(l.target, instance).unit
    arrow = complement_of_square(unit_k, l, unit_l, t_morphism(l, instance), instance)
    ok = validate_morphism(arrow, instance).is_iso
    return ok, {"l": _ser_morphism(l, instance)}


def _law_locality(gen, instance, inject):
    rule = inject if inject is not None else gen.local_rule()
    m = gen.match_onto(rule.lhs)
    ok = is_local_rule(rule, instance)
    ok = ok and is_local_step(agree_step(rule, m, instance), instance)
    return ok, {"rule": docio.rule_doc(rule, instance), "match": _ser_morphism(m, instance)}


def _law_fpbc_final(gen, instance, inject):
    l, m = inject if inject is not None else gen.fpbc_pair()
    fp = fpbc(l, m, instance)
    report = fpbc_verify(l, m, fp.n, fp.a, instance)
    return report.ok, {"l": _ser_morphism(l, instance), "m": _ser_morphism(m, instance),
                       "verify": {"bound": report.bound, "witness": report.counterexample}}


def _law_sqpo_agree(gen, instance, inject):
    rule = inject if inject is not None else gen.span_rule()
    m = gen.match_onto(rule.lhs)
    via_step = agree_step(rule, m, instance).result
    fp = fpbc(rule.l, m, instance)
    via_fpbc = pushout_along_mono(fp.n, rule.r, instance).result
    ok = iso_search(via_step, via_fpbc, instance) is not None
    return ok, {"rule": docio.rule_doc(rule, instance), "match": _ser_morphism(m, instance)}


def _law_psqpo_agree(gen, instance, inject):
    if instance.kind != "gr":
        raise PreconditionError("PSQPO_AGREE runs over plain graphs")
    rule = inject if inject is not None else gen.psqpo_rule()
    m = gen.match_onto(rule.lhs)
    via_pol = psqpo_step(rule, m).result
    via_lifted = agree_step(rule, m, instance).result
    ok = iso_search(via_pol, via_lifted, instance) is not None

    k = carrier(rule.interface)
    full = psqpo_rule(rule.l, rule.r, k.nodes, k.nodes)
    via_full = psqpo_step(full, m).result
    fp = fpbc(rule.l, m, instance)
    via_sqpo = pushout_along_mono(fp.n, rule.r, instance).result
    ok = ok and iso_search(via_full, via_sqpo, instance) is not None
    return ok, {"rule": docio.rule_doc(rule, instance), "match": _ser_morphism(m, instance)}


def _law_counit_iso(gen, instance, inject):
    l = inject if inject is not None else gen.morphism()
    unit_l = t_object(l.target, instance).unit
    unit_k = t_object(l.source, instance).unit
    pb = pullback(unit_l, t_morphism(l, instance), instance)
    j = pullback_mediator(pb, l, unit_k)
    ok = validate_morphism(j, instance).is_iso
    return ok, {"l": _ser_morphism(l, instance)}


_LAWS = {
    "ETA_CARTESIAN": _law_eta_cartesian,
    "PHI_UNIQUE": _law_phi_unique,
    "PHI_DECOMP": _law_phi_decomp,
    "COMPLEMENT_T0": _law_complement_t0,
    "COMPLEMENT_TL_ISO": _law_complement_tl_iso,
    "LOCALITY": _law_locality,
    "FPBC_FINAL": _law_fpbc_final,
    "SQPO_AGREE": _law_sqpo_agree,
    "PSQPO_AGREE": _law_psqpo_agree,
    "COUNIT_ISO": _law_counit_iso,
}


def run_law(law_id: str, seed: int = 0, size_bound=(4, 5), instance: CategoryInstance = GR,
            count: Optional[int] = None, inject=None) -> LawReport:
    """Run one law over ``count`` seeded instances and report the outcome.

    ``inject`` replaces the first generated value, so known counterexamples
    can be replayed (negative controls).
    """
    if law_id not in _LAWS:
        raise UnknownLawError(f"unknown law id {law_id!r}")
    bound = _norm_bound(size_bound)
    count = _DEFAULT_COUNTS[law_id] if count is None else count
    gen = _Gen(random.Random(f"{law_id}/{seed}"), bound, instance)
    checker = _LAWS[law_id]

    failures = 0
    first = None
    for i in range(count):
        value = inject if (inject is not None and i == 0) else None
        ok, payload = checker(gen, instance, value)
        if not ok:
            failures += 1
            if first is None:
                first = payload
    return LawReport(law_id, instance.kind, count, failures == 0, failures, first, seed, bound)


def generate(kind: str, seed: int, size_bound, instance: CategoryInstance = GR):
    """Deterministic random value of the requested kind.

    Kinds: ``graph``, ``mono``, ``morphism``, ``span-rule``, ``psqpo-rule``.
    """
    gen = _Gen(random.Random(f"{kind}/{seed}"), _norm_bound(size_bound), instance)
    if kind == "graph":
        return gen.object()
    if kind == "mono":
        return gen.mono()
    if kind == "morphism":
        return gen.morphism()
    if kind == "span-rule":
        return gen.span_rule()
    if kind == "psqpo-rule":
        return gen.psqpo_rule()
    raise PreconditionError(f"unknown generation kind {kind!r}")
