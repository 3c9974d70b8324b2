"""Finite graphs, typed graphs and polarized graphs, with checked morphisms.

Directed multigraphs over opaque string ids are the base objects.  Two
refinements share the same machinery: graphs typed over a fixed type
graph, and polarized graphs whose nodes carry emission/reception
capabilities (only nodes in ``nplus`` may have outgoing edges, only nodes
in ``nminus`` incoming ones).  A :class:`CategoryInstance` selects one of
the three settings together with the class of admissible embeddings used
by every downstream construction: all injective morphisms for plain and
typed graphs, the *strict* injective ones for polarized graphs.

All values are immutable after construction and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Union

from .errors import PreconditionError, StructuralError

__all__ = [
    "Graph",
    "TypedGraph",
    "PolarizedGraph",
    "Morphism",
    "MorphismReport",
    "CategoryInstance",
    "GR",
    "GRPOL",
    "typed_over",
    "set_category",
    "carrier",
    "belongs",
    "require_object",
    "identity",
    "compose",
    "validate_morphism",
    "is_mono_in_m",
    "is_iso",
    "pol_forget",
    "pol_induce",
    "pol_minimal",
]


@dataclass(frozen=True)
class Graph:
    """A finite directed multigraph: node ids, edge ids, endpoint maps."""

    nodes: frozenset
    src: dict
    tgt: dict

    def __post_init__(self):
        if set(self.src) != set(self.tgt):
            raise StructuralError("src and tgt must be defined on the same edge set")
        for e, n in list(self.src.items()) + list(self.tgt.items()):
            if n not in self.nodes:
                raise StructuralError(f"edge {e!r} has dangling endpoint {n!r}")

    @classmethod
    def build(cls, nodes: Iterable[str] = (), edges: Optional[Mapping[str, tuple]] = None) -> "Graph":
        """Build a graph from a node list and an ``{edge: (src, tgt)}`` mapping."""
        nodes = list(nodes)
        if len(set(nodes)) != len(nodes):
            raise StructuralError("duplicate node id")
        edges = dict(edges or {})
        return cls(
            frozenset(nodes),
            {e: st[0] for e, st in edges.items()},
            {e: st[1] for e, st in edges.items()},
        )

    @property
    def edges(self) -> frozenset:
        return frozenset(self.src)

    def ends(self, e: str) -> tuple:
        return (self.src[e], self.tgt[e])


@dataclass(frozen=True)
class TypedGraph:
    """A graph together with a typing morphism into a fixed type graph."""

    graph: Graph
    typegraph: Graph
    typing: "Morphism"

    def __post_init__(self):
        if self.typing.source != self.graph:
            raise StructuralError("typing must start at the carrier graph")
        if self.typing.target != self.typegraph:
            raise StructuralError("typing must land in the type graph")
        rep = validate_morphism(self.typing, GR)
        if not rep.valid:
            raise StructuralError(f"typing is not a graph morphism: {rep.problems[0]}")

    @classmethod
    def build(cls, graph: Graph, typegraph: Graph, node_types: Mapping[str, str],
              edge_types: Mapping[str, str]) -> "TypedGraph":
        typing = Morphism(graph, typegraph, dict(node_types), dict(edge_types))
        return cls(graph, typegraph, typing)

    def node_type(self, n: str) -> str:
        return self.typing.nodemap[n]

    def edge_type(self, e: str) -> str:
        return self.typing.edgemap[e]


@dataclass(frozen=True)
class PolarizedGraph:
    """A graph whose edges are bounded by node capabilities ``nplus``/``nminus``."""

    graph: Graph
    nplus: frozenset
    nminus: frozenset

    def __post_init__(self):
        if not self.nplus <= self.graph.nodes or not self.nminus <= self.graph.nodes:
            raise StructuralError("polarity sets must be subsets of the node set")
        for e in self.graph.src:
            if self.graph.src[e] not in self.nplus:
                raise StructuralError(f"edge {e!r} leaves node {self.graph.src[e]!r} without + polarity")
            if self.graph.tgt[e] not in self.nminus:
                raise StructuralError(f"edge {e!r} enters node {self.graph.tgt[e]!r} without - polarity")

    @classmethod
    def build(cls, graph: Graph, nplus: Iterable[str], nminus: Iterable[str]) -> "PolarizedGraph":
        return cls(graph, frozenset(nplus), frozenset(nminus))


Object = Union[Graph, TypedGraph, PolarizedGraph]


@dataclass(frozen=True)
class Morphism:
    """A pair of maps on node and edge ids between two objects.

    Construction does not validate; run :func:`validate_morphism` or use the
    construction helpers, which validate their outputs.
    """

    source: object
    target: object
    nodemap: dict
    edgemap: dict


def carrier(obj: Object) -> Graph:
    """The underlying plain graph of any of the three object kinds."""
    if isinstance(obj, Graph):
        return obj
    if isinstance(obj, (TypedGraph, PolarizedGraph)):
        return obj.graph
    raise PreconditionError(f"not a graph object: {obj!r}")


@dataclass(frozen=True)
class CategoryInstance:
    """Selector for one of the three settings and its class of embeddings.

    ``kind`` is ``"gr"``, ``"typed"`` or ``"grpol"``.  The admissible monos
    are all injective morphisms for ``gr``/``typed`` and the strict
    injective ones for ``grpol``.
    """

    kind: str
    typegraph: Optional[Graph] = None

    def __post_init__(self):
        if self.kind not in ("gr", "typed", "grpol"):
            raise PreconditionError(f"unknown category kind {self.kind!r}")
        if (self.kind == "typed") != (self.typegraph is not None):
            raise PreconditionError("typed instances need a type graph, others must not have one")


GR = CategoryInstance("gr")
GRPOL = CategoryInstance("grpol")


def typed_over(typegraph: Graph) -> CategoryInstance:
    """The instance of graphs typed over ``typegraph``."""
    return CategoryInstance("typed", typegraph)


def set_category() -> CategoryInstance:
    """Plain sets, encoded as graphs typed over a one-node, edge-free base."""
    return typed_over(Graph.build(["elem"]))


def belongs(obj, instance: CategoryInstance) -> bool:
    if instance.kind == "gr":
        return isinstance(obj, Graph)
    if instance.kind == "typed":
        return isinstance(obj, TypedGraph) and obj.typegraph == instance.typegraph
    return isinstance(obj, PolarizedGraph)


def require_object(obj, instance: CategoryInstance):
    if not belongs(obj, instance):
        raise PreconditionError(f"object {type(obj).__name__} does not belong to instance {instance.kind!r}")
    return obj


def identity(obj: Object) -> Morphism:
    g = carrier(obj)
    return Morphism(obj, obj, {n: n for n in g.nodes}, {e: e for e in g.src})


def compose(g: Morphism, f: Morphism) -> Morphism:
    """The composite ``g after f``; targets and sources must match exactly."""
    if f.target != g.source:
        raise PreconditionError("composition mismatch: target of the inner arrow differs from source of the outer")
    return Morphism(
        f.source,
        g.target,
        {x: g.nodemap[y] for x, y in f.nodemap.items()},
        {e: g.edgemap[d] for e, d in f.edgemap.items()},
    )


@dataclass(frozen=True)
class MorphismReport:
    valid: bool
    is_mono_in_M: bool
    is_iso: bool
    problems: tuple = ()


def _structural_check(f: Morphism):
    sg, tg = carrier(f.source), carrier(f.target)
    for x in f.nodemap:
        if x not in sg.nodes:
            raise StructuralError(f"nodemap mentions unknown source node {x!r}")
    for y in f.nodemap.values():
        if y not in tg.nodes:
            raise StructuralError(f"nodemap targets unknown node {y!r}")
    for e in f.edgemap:
        if e not in sg.src:
            raise StructuralError(f"edgemap mentions unknown source edge {e!r}")
    for d in f.edgemap.values():
        if d not in tg.src:
            raise StructuralError(f"edgemap targets unknown edge {d!r}")


def validate_morphism(f: Morphism, instance: CategoryInstance) -> MorphismReport:
    """Check the morphism obligations of ``f`` in the given instance.

    Dangling map entries raise :class:`StructuralError`; a well-formed map
    that fails an obligation yields ``valid=False`` with the reasons.
    """
    require_object(f.source, instance)
    require_object(f.target, instance)
    _structural_check(f)
    sg, tg = carrier(f.source), carrier(f.target)

    problems = []
    if set(f.nodemap) != sg.nodes:
        problems.append("nodemap is not total on the source nodes")
    if set(f.edgemap) != set(sg.src):
        problems.append("edgemap is not total on the source edges")
    if not problems:
        for e, d in f.edgemap.items():
            if f.nodemap[sg.src[e]] != tg.src[d] or f.nodemap[sg.tgt[e]] != tg.tgt[d]:
                problems.append(f"edge {e!r} is not mapped homomorphically")
                break
        if instance.kind == "typed":
            tx, ty = f.source.typing, f.target.typing
            if any(ty.nodemap[f.nodemap[x]] != tx.nodemap[x] for x in sg.nodes) or any(
                ty.edgemap[f.edgemap[e]] != tx.edgemap[e] for e in sg.src
            ):
                problems.append("typing is not preserved")
        elif instance.kind == "grpol":
            if not {f.nodemap[x] for x in f.source.nplus} <= f.target.nplus:
                problems.append("+ polarity is not preserved")
            if not {f.nodemap[x] for x in f.source.nminus} <= f.target.nminus:
                problems.append("- polarity is not preserved")

    valid = not problems
    mono = valid and len(set(f.nodemap.values())) == len(f.nodemap) and len(set(f.edgemap.values())) == len(f.edgemap)
    if mono and instance.kind == "grpol":
        # Strictness, pointwise: x gains a capability exactly when its image has it.
        mono = all((x in f.source.nplus) == (f.nodemap[x] in f.target.nplus) for x in sg.nodes) and all(
            (x in f.source.nminus) == (f.nodemap[x] in f.target.nminus) for x in sg.nodes
        )

    iso = (
        valid
        and len(set(f.nodemap.values())) == len(tg.nodes) == len(sg.nodes)
        and len(set(f.edgemap.values())) == len(tg.src) == len(sg.src)
    )
    if iso and instance.kind == "grpol":
        iso = {f.nodemap[x] for x in f.source.nplus} == f.target.nplus and {
            f.nodemap[x] for x in f.source.nminus
        } == f.target.nminus

    return MorphismReport(valid, mono, iso, tuple(problems))


def is_mono_in_m(f: Morphism, instance: CategoryInstance) -> bool:
    return validate_morphism(f, instance).is_mono_in_M


def is_iso(f: Morphism, instance: CategoryInstance) -> bool:
    return validate_morphism(f, instance).is_iso


# -- polarity functors -------------------------------------------------------

def pol_forget(x):
    """Drop polarity: polarized graphs/morphisms to plain ones."""
    if isinstance(x, PolarizedGraph):
        return x.graph
    if isinstance(x, Morphism):
        return Morphism(pol_forget(x.source), pol_forget(x.target), dict(x.nodemap), dict(x.edgemap))
    raise PreconditionError("pol_forget expects a polarized graph or morphism")


def pol_induce(x):
    """Give every node both capabilities; on morphisms this is strict."""
    if isinstance(x, Graph):
        return PolarizedGraph(x, x.nodes, x.nodes)
    if isinstance(x, Morphism):
        return Morphism(pol_induce(x.source), pol_induce(x.target), dict(x.nodemap), dict(x.edgemap))
    raise PreconditionError("pol_induce expects a plain graph or morphism")


def pol_minimal(x):
    """The least polarity supporting the edges: + where an edge leaves, - where one enters."""
    if isinstance(x, Graph):
        return PolarizedGraph(x, frozenset(x.src.values()), frozenset(x.tgt.values()))
    if isinstance(x, Morphism):
        return Morphism(pol_minimal(x.source), pol_minimal(x.target), dict(x.nodemap), dict(x.edgemap))
    raise PreconditionError("pol_minimal expects a plain graph or morphism")
