"""Partition functions and coloring-flow duality for G-labelled graphs on surfaces."""

from .characters import (
    CharacterError,
    CharacterTable,
    ClassFunction,
    character_table,
    class_indicator,
    decompose,
    inner_product,
    regular_character,
    trivial_character,
)
from .duality import (
    Covering,
    DualityError,
    GColoring,
    GlobalCoveringTension,
    Walk,
    build_covering,
    coloring_to_tension,
    colorings_from_tension,
    covering_tension_to_flow,
    derived_graph,
    dual_labeling,
    factor_through,
    flow_to_dual_tension,
    flow_to_proper_coloring,
    is_flow,
    is_global_tension,
    is_local_tension,
    primal_labeling,
    random_flows,
    walk_height,
)
from .embedding import (
    DualGraph,
    Edge,
    EmbeddedGraph,
    Face,
    GraphError,
    GraphMorphism,
    bouquet,
    check_covering,
    components,
    dual_graph,
    euler_genus,
    genus,
    is_connected,
    trace_faces,
)
from .groups import FiniteGroup, GroupError, build_group
from .io import load_graph, parse_graph
from .partition import (
    BudgetExceeded,
    CountResult,
    EdgeLabeling,
    abelian_flow_count,
    count_flows,
    count_nowhere_identity,
    enumerate_flows,
    frobenius_count,
    partition_brute,
    partition_closed,
    partition_multiplicative,
    partition_nowhere_identity,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "CharacterError",
    "CharacterTable",
    "ClassFunction",
    "CountResult",
    "Covering",
    "DualGraph",
    "DualityError",
    "Edge",
    "EdgeLabeling",
    "EmbeddedGraph",
    "Face",
    "FiniteGroup",
    "GColoring",
    "GlobalCoveringTension",
    "GraphError",
    "GraphMorphism",
    "GroupError",
    "Walk",
    "abelian_flow_count",
    "bouquet",
    "build_covering",
    "build_group",
    "character_table",
    "check_covering",
    "class_indicator",
    "coloring_to_tension",
    "colorings_from_tension",
    "components",
    "count_flows",
    "count_nowhere_identity",
    "covering_tension_to_flow",
    "decompose",
    "derived_graph",
    "dual_graph",
    "dual_labeling",
    "enumerate_flows",
    "euler_genus",
    "factor_through",
    "flow_to_dual_tension",
    "flow_to_proper_coloring",
    "frobenius_count",
    "genus",
    "inner_product",
    "is_connected",
    "is_flow",
    "is_global_tension",
    "is_local_tension",
    "load_graph",
    "parse_graph",
    "partition_brute",
    "partition_closed",
    "partition_multiplicative",
    "partition_nowhere_identity",
    "primal_labeling",
    "random_flows",
    "regular_character",
    "trace_faces",
    "trivial_character",
    "walk_height",
]
