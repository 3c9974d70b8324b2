"""Object invariants, morphism validation, and the polarity functors."""

import pytest
from hypothesis import given, settings, strategies as st

from agree import (
    GR,
    GRPOL,
    Graph,
    Morphism,
    PolarizedGraph,
    StructuralError,
    TypedGraph,
    carrier,
    compose,
    identity,
    pol_forget,
    pol_induce,
    pol_minimal,
    set_category,
    typed_over,
    validate_morphism,
)


@st.composite
def graphs(draw, max_nodes=4, max_edges=4):
    n = draw(st.integers(0, max_nodes))
    nodes = [f"n{i}" for i in range(n)]
    edges = {}
    if n:
        for i in range(draw(st.integers(0, max_edges))):
            edges[f"e{i}"] = (draw(st.sampled_from(nodes)), draw(st.sampled_from(nodes)))
    return Graph.build(nodes, edges)


@st.composite
def morphisms(draw):
    """A valid plain-graph morphism built over a drawn target."""
    target = draw(graphs())
    tnodes = sorted(target.nodes)
    tedges = sorted(target.src)
    n = draw(st.integers(0, 3)) if tnodes else 0
    nodes = [f"x{i}" for i in range(n)]
    nodemap = {x: draw(st.sampled_from(tnodes)) for x in nodes}
    edges = {}
    edgemap = {}
    if nodes and tedges:
        for i in range(draw(st.integers(0, 3))):
            d = draw(st.sampled_from(tedges))
            srcs = [x for x in nodes if nodemap[x] == target.src[d]]
            tgts = [x for x in nodes if nodemap[x] == target.tgt[d]]
            if srcs and tgts:
                edges[f"xe{i}"] = (draw(st.sampled_from(srcs)), draw(st.sampled_from(tgts)))
                edgemap[f"xe{i}"] = d
    return Morphism(Graph.build(nodes, edges), target, nodemap, edgemap)


class TestGraphInvariants:
    def test_dangling_endpoint_rejected(self):
        with pytest.raises(StructuralError):
            Graph.build(["a"], {"e": ("a", "b")})

    def test_duplicate_node_rejected(self):
        with pytest.raises(StructuralError):
            Graph.build(["a", "a"])

    def test_src_tgt_same_edge_set(self):
        with pytest.raises(StructuralError):
            Graph(frozenset(["a"]), {"e": "a"}, {})

    def test_polarized_edge_needs_capabilities(self):
        g = Graph.build(["a", "b"], {"e": ("a", "b")})
        with pytest.raises(StructuralError):
            PolarizedGraph(g, frozenset(), frozenset(["b"]))
        PolarizedGraph(g, frozenset(["a"]), frozenset(["b"]))

    def test_typed_needs_valid_typing(self):
        g = Graph.build(["a"])
        tg = Graph.build(["t"])
        with pytest.raises(StructuralError):
            TypedGraph(g, tg, Morphism(g, tg, {}, {}))


class TestValidateMorphism:
    def test_identity_is_iso(self):
        g = Graph.build(["a", "b"], {"e": ("a", "b")})
        rep = validate_morphism(identity(g), GR)
        assert rep.valid and rep.is_mono_in_M and rep.is_iso

    def test_collapse_is_not_mono(self):
        g2 = Graph.build(["a", "b"])
        g1 = Graph.build(["c"])
        f = Morphism(g2, g1, {"a": "c", "b": "c"}, {})
        rep = validate_morphism(f, GR)
        assert rep.valid and not rep.is_mono_in_M and not rep.is_iso

    def test_polarized_inclusion_can_fail_strictness(self):
        # one node, no polarity, included into the fully polarized point
        a0 = PolarizedGraph(Graph.build(["a"]), frozenset(), frozenset())
        a1 = PolarizedGraph(Graph.build(["a"]), frozenset(["a"]), frozenset(["a"]))
        f = Morphism(a0, a1, {"a": "a"}, {})
        rep = validate_morphism(f, GRPOL)
        assert rep.valid
        assert not rep.is_mono_in_M
        assert not rep.is_iso

    def test_dangling_entry_is_structural_not_invalid(self):
        g = Graph.build(["a"])
        f = Morphism(g, g, {"a": "a", "ghost": "a"}, {})
        with pytest.raises(StructuralError):
            validate_morphism(f, GR)

    def test_missing_entry_is_invalid_not_structural(self):
        g = Graph.build(["a", "b"])
        f = Morphism(g, g, {"a": "a"}, {})
        rep = validate_morphism(f, GR)
        assert not rep.valid
        assert any("total" in p for p in rep.problems)

    def test_non_homomorphic_map_reported(self):
        g = Graph.build(["a", "b"], {"e": ("a", "b")})
        f = Morphism(g, g, {"a": "b", "b": "a"}, {"e": "e"})
        rep = validate_morphism(f, GR)
        assert not rep.valid

    def test_typed_morphism_must_preserve_types(self):
        inst = typed_over(Graph.build(["t", "u"]))
        g = Graph.build(["a"])
        x = TypedGraph(g, inst.typegraph, Morphism(g, inst.typegraph, {"a": "t"}, {}))
        y = TypedGraph(g, inst.typegraph, Morphism(g, inst.typegraph, {"a": "u"}, {}))
        rep = validate_morphism(Morphism(x, y, {"a": "a"}, {}), inst)
        assert not rep.valid


class TestPolarityFunctors:
    def test_induce_single_node(self):
        g = Graph.build(["a"])
        p = pol_induce(g)
        assert p.nplus == frozenset(["a"]) and p.nminus == frozenset(["a"])

    def test_minimal_on_an_edge(self):
        g = Graph.build(["a", "b"], {"e": ("a", "b")})
        p = pol_minimal(g)
        assert p.nplus == frozenset(["a"]) and p.nminus == frozenset(["b"])

    @settings(max_examples=60, deadline=None)
    @given(graphs())
    def test_forget_after_induce_is_identity(self, g):
        assert pol_forget(pol_induce(g)) == g

    @settings(max_examples=60, deadline=None)
    @given(morphisms())
    def test_induced_morphisms_are_strict(self, f):
        rep = validate_morphism(pol_induce(f), GRPOL)
        assert rep.valid
        assert (f.nodemap == {}) or rep.is_mono_in_M == validate_morphism(f, GR).is_mono_in_M

    @settings(max_examples=60, deadline=None)
    @given(morphisms())
    def test_minimal_polarity_is_a_morphism(self, f):
        assert validate_morphism(pol_minimal(f), GRPOL).valid


class TestComposition:
    @settings(max_examples=60, deadline=None)
    @given(morphisms(), st.integers(0, 2))
    def test_composition_closure(self, f, extra):
        # extend the target by a couple of items, then embed: g . f stays valid
        tg = carrier(f.target)
        nodes = set(tg.nodes) | {f"pad{i}" for i in range(extra)}
        bigger = Graph(frozenset(nodes), dict(tg.src), dict(tg.tgt))
        g = Morphism(f.target, bigger, {x: x for x in tg.nodes}, {e: e for e in tg.src})
        assert validate_morphism(g, GR).valid
        assert validate_morphism(compose(g, f), GR).valid

    def test_composition_requires_matching_ends(self):
        a = Graph.build(["a"])
        b = Graph.build(["b"])
        with pytest.raises(Exception):
            compose(Morphism(a, a, {"a": "a"}, {}), Morphism(b, b, {"b": "b"}, {}))


def test_set_category_is_node_only():
    inst = set_category()
    assert len(inst.typegraph.nodes) == 1 and not inst.typegraph.src
