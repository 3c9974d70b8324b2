"""Algebraic graph rewriting with controlled embedding.

Finite graphs, typed graphs and polarized graphs; partial-map classifiers;
rewrite steps that let a rule say which context edges preserved or cloned
items keep; and an executable suite of the structural laws the engine
relies on.
"""

from .core import (
    GR,
    GRPOL,
    CategoryInstance,
    Graph,
    Morphism,
    MorphismReport,
    PolarizedGraph,
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
from .catops import (
    Constants,
    Cospan,
    Pullback,
    Pushout,
    Span,
    SquareWitness,
    bang,
    constants,
    enumerate_monos,
    enumerate_morphisms,
    final_object,
    initial_object,
    is_pullback_square,
    iso_search,
    pullback,
    pullback_mediator,
    pushout_along_mono,
    zero,
)
from .classifier import (
    Characteristic,
    ClassifiedObject,
    bar,
    characteristic,
    phi,
    t_morphism,
    t_object,
)
from .rewrite import (
    Fpbc,
    FpbcReport,
    PolarizedPhase,
    RewriteTrace,
    Rule,
    agree_rule,
    agree_step,
    complement_of_square,
    enumerate_matches,
    fpbc,
    fpbc_verify,
    is_local_rule,
    is_local_step,
    psqpo_rule,
    psqpo_step,
    sqpo_rule,
    strict_complement,
)
from .laws import DEFAULT_TYPEGRAPH, LAW_IDS, LawReport, default_instance, generate, run_law
from .errors import (
    DocumentError,
    GraphError,
    PreconditionError,
    RuleError,
    StructuralError,
    UnknownLawError,
)

__all__ = [name for name in dir() if not name.startswith("_")]
