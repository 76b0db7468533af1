"""Heights, tensions, coverings and the coloring-flow correspondence.

The covering H_psi of a graph with a local tension psi is built directly
as a component of the derived (voltage) graph: vertices are pairs
``(u, h)`` with ``h`` the height of some walk from the base vertex to
``u``.  Labelling non-backtracking walks gives the same pairs as
labelling all walks, because a backtracking step contributes
``psi(e) psi(e)^-1 = 1`` to the height, so the quotient of the universal
cover by equal labels never has to be materialised.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Optional

from .embedding import (
    BACKWARD,
    FORWARD,
    HEAD,
    TAIL,
    Arc,
    DualGraph,
    Edge,
    EmbeddedGraph,
    Face,
    GraphError,
    GraphMorphism,
    check_covering,
    components,
    dual_graph,
    is_connected,
    trace_faces,
)
from .groups import FiniteGroup
from .partition import EdgeLabeling, vertex_product


class DualityError(ValueError):
    pass


# -- walks and heights ---------------------------------------------------------


@dataclass(frozen=True)
class Walk:
    start: str
    steps: tuple[Arc, ...] = ()

    def vertices(self, graph: EmbeddedGraph) -> list[str]:
        """Visited vertices; raises DualityError if consecutive steps do not meet."""
        out = [self.start]
        for arc in self.steps:
            if arc[0] not in graph.edge or arc[1] not in (FORWARD, BACKWARD):
                raise DualityError(f"unknown step {arc!r}")
            if graph.arc_source(arc) != out[-1]:
                raise DualityError(f"step {arc!r} does not start at {out[-1]}")
            out.append(graph.arc_target(arc))
        return out

    def end(self, graph: EmbeddedGraph) -> str:
        return self.vertices(graph)[-1]

    def is_closed(self, graph: EmbeddedGraph) -> bool:
        return self.end(graph) == self.start

    def __add__(self, other: Walk) -> Walk:
        return Walk(self.start, self.steps + other.steps)

    def reversed(self, graph: EmbeddedGraph) -> Walk:
        back = tuple((e, BACKWARD if d == FORWARD else FORWARD) for e, d in reversed(self.steps))
        return Walk(self.end(graph), back)


def walk_height(psi: EdgeLabeling, walk: Walk) -> int:
    """Left-to-right product of psi(e)^(+1) on forward and psi(e)^(-1) on backward steps."""
    walk.vertices(psi.graph)
    g = psi.group
    acc = 0
    for eid, direction in walk.steps:
        x = psi[eid]
        acc = g.mul(acc, x if direction == FORWARD else g.inv(x))
    return acc


def facial_walk(graph: EmbeddedGraph, face: Face) -> Walk:
    return Walk(face.anchor, face.arcs)


# -- flows and tensions --------------------------------------------------------


def is_flow(psi: EdgeLabeling) -> bool:
    return all(vertex_product(psi, v) == 0 for v in psi.graph.vertices)


def is_local_tension(psi: EdgeLabeling) -> bool:
    return all(walk_height(psi, facial_walk(psi.graph, f)) == 0 for f in trace_faces(psi.graph))


def _potential(psi: EdgeLabeling, root: str) -> tuple[dict[str, int], Optional[str]]:
    """Tree-path heights from ``root`` and the first edge (if any) that closes with nonzero height."""
    g, graph = psi.group, psi.graph
    incident: dict[str, list[tuple[Arc, str]]] = {v: [] for v in graph.vertices}
    for e in graph.edges:
        incident[e.tail].append(((e.id, FORWARD), e.head))
        incident[e.head].append(((e.id, BACKWARD), e.tail))
    pot = {root: 0}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for (eid, d), w in incident[u]:
            if w not in pot:
                x = psi[eid]
                pot[w] = g.mul(pot[u], x if d == FORWARD else g.inv(x))
                queue.append(w)
    for e in graph.edges:
        if e.tail in pot and g.mul(pot[e.tail], psi[e.id]) != pot[e.head]:
            return pot, e.id
    return pot, None


def is_global_tension(psi: EdgeLabeling) -> bool:
    """Every closed walk has height 1; decided on a BFS spanning tree."""
    if not is_connected(psi.graph):
        raise GraphError("is_global_tension needs a connected graph")
    _, bad = _potential(psi, psi.graph.vertices[0])
    return bad is None


# -- colorings -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GColoring:
    graph: EmbeddedGraph
    group: FiniteGroup
    values: Mapping[str, int]

    def __post_init__(self):
        values = {k: int(v) for k, v in self.values.items()}
        if set(values) != set(self.graph.vertices):
            raise ValueError("coloring must assign every vertex exactly once")
        object.__setattr__(self, "values", values)

    def __getitem__(self, v):
        return self.values[v]

    @property
    def is_proper(self) -> bool:
        return all(self.values[e.tail] != self.values[e.head] for e in self.graph.edges)

    def translated(self, g: int) -> GColoring:
        """Right translate u -> kappa(u) g."""
        return GColoring(self.graph, self.group, {v: self.group.mul(c, g) for v, c in self.values.items()})

    def as_tuple(self) -> tuple[int, ...]:
        return tuple(self.values[v] for v in self.graph.vertices)


def coloring_to_tension(kappa: GColoring) -> EdgeLabeling:
    """psi(e) = kappa(tail) kappa(head)^-1."""
    g = kappa.group
    return EdgeLabeling(
        kappa.graph, g, {e.id: g.mul(kappa[e.tail], g.inv(kappa[e.head])) for e in kappa.graph.edges}
    )


def colorings_from_tension(psi: EdgeLabeling) -> list[GColoring]:
    """The |G| colorings mapping to a global tension psi, in translate order.

    The base coloring is the inverse of the tree-path height from the
    first vertex, which is the choice that makes coloring_to_tension
    return psi under the left-to-right height convention.
    """
    graph, g = psi.graph, psi.group
    if not is_connected(graph):
        raise GraphError("colorings_from_tension needs a connected graph")
    pot, bad = _potential(psi, graph.vertices[0])
    if bad is not None:
        raise DualityError(f"not a global tension (edge {bad} closes a walk with nonzero height)")
    base = GColoring(graph, g, {v: g.inv(h) for v, h in pot.items()})
    return [base.translated(x) for x in range(g.order)]


# -- dual labelings --------------------------------------------------------------


def dual_labeling(dual: DualGraph, psi: EdgeLabeling) -> EdgeLabeling:
    return EdgeLabeling(dual.graph, psi.group, {dual.to_dual[e]: x for e, x in psi.values.items()})


def primal_labeling(dual: DualGraph, psi_star: EdgeLabeling) -> EdgeLabeling:
    return EdgeLabeling(dual.primal, psi_star.group, {dual.to_primal[e]: x for e, x in psi_star.values.items()})


def flow_to_dual_tension(graph: EmbeddedGraph, psi: EdgeLabeling) -> tuple[DualGraph, EdgeLabeling]:
    """Transport psi to the dual; psi is a flow iff the result is a local tension."""
    if not is_connected(graph):
        raise GraphError("flow_to_dual_tension needs a connected graph")
    if psi.graph is not graph:
        raise ValueError("labeling belongs to a different graph")
    dual = dual_graph(graph)
    return dual, dual_labeling(dual, psi)


# -- coverings ---------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Covering:
    """A covering ``projection: total -> base`` with a sheet label per total vertex."""

    total: EmbeddedGraph
    base: EmbeddedGraph
    projection: GraphMorphism
    sheets: Mapping[str, tuple[str, int]]

    @property
    def n_sheets(self) -> int:
        return len(self.total.vertices) // max(1, len(self.base.vertices))

    def validate(self) -> list[str]:
        problems = list(check_covering(self.projection).violations)
        labels = list(self.sheets.values())
        if len(set(labels)) != len(labels) or set(self.sheets) != set(self.total.vertices):
            problems.append("sheet labels are not a bijection on total vertices")
        for v, (b, _) in self.sheets.items():
            if self.projection.vertex_map.get(v) != b:
                problems.append(f"sheet label of {v} disagrees with its projection")
        return problems

    def lift(self, psi: EdgeLabeling) -> EdgeLabeling:
        """psi_s(e) = psi(s(e)) on the total graph."""
        emap = self.projection.edge_map
        return EdgeLabeling(self.total, psi.group, {e.id: psi[emap[e.id]] for e in self.total.edges})


def _vid(u: str, h: int) -> str:
    return f"{u}@{h}"


def _derived(graph: EmbeddedGraph, psi: EdgeLabeling, starts: Iterable[tuple[str, int]]) -> Covering:
    """Derived-graph vertices reachable from ``starts``, in BFS order."""
    g = psi.group
    out_edges: dict[str, list[Edge]] = {v: [] for v in graph.vertices}
    in_edges: dict[str, list[Edge]] = {v: [] for v in graph.vertices}
    for e in graph.edges:
        out_edges[e.tail].append(e)
        in_edges[e.head].append(e)
    seen: dict[tuple[str, int], None] = {}
    queue = deque()
    for s in starts:
        if s not in seen:
            seen[s] = None
            queue.append(s)
        while queue:
            u, h = queue.popleft()
            for eid, end in graph.rotations[u]:
                e = graph.edge[eid]
                if end == TAIL:
                    nxt = (e.head, g.mul(h, psi[eid]))
                else:
                    nxt = (e.tail, g.mul(h, g.inv(psi[eid])))
                if nxt not in seen:
                    seen[nxt] = None
                    queue.append(nxt)
    verts = list(seen)
    vertex_ids = tuple(_vid(u, h) for u, h in verts)
    edges = []
    dart_map = {}
    for u, h in verts:
        for e in out_edges[u]:
            lifted = f"{e.id}@{h}"
            edges.append(Edge(lifted, _vid(u, h), _vid(e.head, g.mul(h, psi[e.id]))))
            dart_map[(lifted, TAIL)] = (e.id, TAIL)
            dart_map[(lifted, HEAD)] = (e.id, HEAD)
    rot = {}
    for u, h in verts:
        darts = []
        for eid, end in graph.rotations[u]:
            if end == TAIL:
                darts.append((f"{eid}@{h}", TAIL))
            else:
                darts.append((f"{eid}@{g.mul(h, g.inv(psi[eid]))}", HEAD))
        rot[_vid(u, h)] = tuple(darts)
    total = EmbeddedGraph(vertex_ids, tuple(edges), rot)
    projection = GraphMorphism(total, graph, {_vid(u, h): u for u, h in verts}, dart_map)
    sheets = {_vid(u, h): (u, h) for u, h in verts}
    return Covering(total, graph, projection, sheets)


def base_vertex(graph: EmbeddedGraph) -> str:
    return min(graph.vertices)


def build_covering(graph: EmbeddedGraph, psi: EdgeLabeling, *, start_height: int = 0) -> Covering:
    """The minimal covering H_psi on which the lift of psi is a global tension.

    Built from ``(v, start_height)`` with ``v`` the smallest vertex id.
    Crossing edge e from (u, h) along its direction reaches (head, h psi(e)),
    against it (tail, h psi(e)^-1).
    """
    if not is_connected(graph):
        raise GraphError("build_covering needs a connected graph")
    if psi.graph is not graph:
        raise ValueError("labeling belongs to a different graph")
    if not is_local_tension(psi):
        raise DualityError("labeling is not a local tension")
    cov = _derived(graph, psi, [(base_vertex(graph), start_height)])
    problems = cov.validate()
    if problems:
        raise AssertionError("; ".join(problems))
    if not is_global_tension(cov.lift(psi)):
        raise AssertionError("lifted labeling is not a global tension")
    if psi.group.order % cov.n_sheets or len(cov.total.vertices) % len(graph.vertices):
        raise AssertionError("sheet count does not divide |G|")
    return cov


def derived_graph(graph: EmbeddedGraph, psi: EdgeLabeling) -> Covering:
    """All |G| sheets of the derived graph (disconnected unless psi's heights generate G)."""
    starts = [(u, h) for h in range(psi.group.order) for u in graph.vertices]
    return _derived(graph, psi, starts)


def restrict_covering(cov: Covering, total_component: EmbeddedGraph) -> Covering:
    """The covering restricted to one connected component of its total graph."""
    vs = set(total_component.vertices)
    es = {e.id for e in total_component.edges}
    proj = GraphMorphism(
        total_component,
        cov.base,
        {v: w for v, w in cov.projection.vertex_map.items() if v in vs},
        {d: x for d, x in cov.projection.dart_map.items() if d[0] in es},
    )
    return Covering(total_component, cov.base, proj, {v: s for v, s in cov.sheets.items() if v in vs})


def factor_through(cover: Covering, psi: EdgeLabeling, minimal: Covering) -> GraphMorphism:
    """The map r with ``minimal.projection o r == cover.projection``.

    ``cover`` must be connected and global with respect to ``psi``.  Each
    total vertex is labelled by (projection, height of a projected walk from
    a start vertex over the base vertex); the labels name vertices of
    ``minimal``.
    """
    if not is_connected(cover.total):
        raise GraphError("factor_through needs a connected covering")
    g = psi.group
    root_base = base_vertex(cover.base)
    start_label = next(lab for lab in minimal.sheets.values() if lab[0] == root_base)
    start = next(v for v in cover.total.vertices if cover.projection.vertex_map[v] == root_base)
    by_label = {lab: v for v, lab in minimal.sheets.items()}
    emap = cover.projection.edge_map
    label = {start: start_label}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for eid, end in cover.total.rotations[x]:
            e = cover.total.edge[eid]
            val = psi[emap[eid]]
            if end == TAIL:
                y, h = e.head, g.mul(label[x][1], val)
            else:
                y, h = e.tail, g.mul(label[x][1], g.inv(val))
            lab = (cover.projection.vertex_map[y], h)
            if y in label:
                if label[y] != lab:
                    raise DualityError("covering is not global with respect to psi")
            else:
                label[y] = lab
                queue.append(y)
    vmap = {x: by_label[lab] for x, lab in label.items()}
    dart_map = {}
    for e in cover.total.edges:
        base_e = emap[e.id]
        lifted = f"{base_e}@{label[e.tail][1]}"
        dart_map[(e.id, TAIL)] = (lifted, TAIL)
        dart_map[(e.id, HEAD)] = (lifted, HEAD)
    return GraphMorphism(cover.total, minimal.total, vmap, dart_map)


@dataclass(frozen=True, eq=False)
class GlobalCoveringTension:
    covering: Covering
    labeling: EdgeLabeling

    def pushdown(self) -> EdgeLabeling:
        """psi o s^-1 on the base; raises DualityError if psi is not constant on fibers."""
        emap = self.covering.projection.edge_map
        values: dict[str, int] = {}
        for eid, x in self.labeling.values.items():
            b = emap[eid]
            if values.setdefault(b, x) != x:
                raise DualityError(f"labeling is not constant on the fiber over {b}")
        return EdgeLabeling(self.covering.base, self.labeling.group, values)

    def problems(self) -> list[str]:
        out = list(self.covering.validate())
        try:
            down = self.pushdown()
        except DualityError as exc:
            return out + [str(exc)]
        for comp in components(self.covering.total):
            sub = EdgeLabeling(comp, self.labeling.group, {e.id: self.labeling[e.id] for e in comp.edges})
            if not is_global_tension(sub):
                out.append("labeling is not a global tension on the total graph")
                break
        if not is_local_tension(down):
            out.append("pushdown is not a local tension")
        return out


# -- the correspondence ---------------------------------------------------------------


class ColoringOfCover(NamedTuple):
    covering: Covering
    coloring: GColoring
    dual: DualGraph
    tension: GlobalCoveringTension


def flow_to_proper_coloring(graph: EmbeddedGraph, psi: EdgeLabeling) -> ColoringOfCover:
    """Nowhere-identity flow on H -> proper coloring of the covering of H* it determines.

    The coloring sends sheet (u, h) to h^-1, so that coloring_to_tension
    gives back the lifted dual labeling.
    """
    if not psi.nowhere_identity:
        raise DualityError("flow takes the identity value")
    if not is_flow(psi):
        raise DualityError("labeling is not a flow")
    dual, psi_star = flow_to_dual_tension(graph, psi)
    if not is_local_tension(psi_star):
        raise AssertionError("dual of a flow is not a local tension")
    cov = build_covering(dual.graph, psi_star)
    g = psi.group
    kappa = GColoring(cov.total, g, {v: g.inv(h) for v, (_, h) in cov.sheets.items()})
    if not kappa.is_proper:
        raise AssertionError("sheet coloring is not proper")
    return ColoringOfCover(cov, kappa, dual, GlobalCoveringTension(cov, cov.lift(psi_star)))


def covering_tension_to_flow(t: GlobalCoveringTension, dual: DualGraph) -> EdgeLabeling:
    """Global covering tension on H* -> flow on H."""
    if t.covering.base is not dual.graph:
        raise ValueError("covering is not over this dual graph")
    problems = t.problems()
    if problems:
        raise DualityError("; ".join(problems))
    psi = primal_labeling(dual, t.pushdown())
    if not is_flow(psi):
        raise AssertionError("pulled-back labeling is not a flow")
    return psi


# -- sampling flows ---------------------------------------------------------------------


def random_flows(
    graph: EmbeddedGraph,
    group: FiniteGroup,
    count: int,
    *,
    seed: int = 0,
    nowhere_identity: bool = True,
    max_attempts: int = 100_000,
) -> list[EdgeLabeling]:
    """Distinct flows drawn uniformly by random cotree values and solved tree values.

    For a spanning tree, every assignment on the remaining edges extends in
    at most one way to a flow: processing vertices leaves-first, each
    vertex condition fixes its parent edge.
    """
    if not is_connected(graph):
        raise GraphError("random_flows needs a connected graph")
    rng = random.Random(seed)
    g = group
    root = graph.vertices[0]
    parent: dict[str, str] = {}
    order = [root]
    seen = {root}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for eid, end in graph.rotations[u]:
            e = graph.edge[eid]
            w = e.head if end == TAIL else e.tail
            if w not in seen:
                seen.add(w)
                parent[w] = eid
                order.append(w)
                queue.append(w)
    tree = set(parent.values())
    cotree = [e.id for e in graph.edges if e.id not in tree]
    low = 1 if nowhere_identity else 0
    found: dict[tuple, EdgeLabeling] = {}
    for _ in range(max_attempts):
        if len(found) >= count:
            break
        vals = {eid: rng.randrange(low, g.order) for eid in cotree}
        for v in reversed(order[1:]):
            pe = parent[v]
            prefix, suffix, sign, hit = 0, 0, 1, False
            for eid, end in graph.rotations[v]:
                if eid == pe:
                    hit, sign = True, (-1 if end == TAIL else 1)
                    continue
                x = vals[eid] if end == HEAD else g.inv(vals[eid])
                if hit:
                    suffix = g.mul(suffix, x)
                else:
                    prefix = g.mul(prefix, x)
            y = g.mul(g.inv(prefix), g.inv(suffix))
            vals[pe] = y if sign == 1 else g.inv(y)
        psi = EdgeLabeling(graph, g, vals)
        if nowhere_identity and not psi.nowhere_identity:
            continue
        if vertex_product(psi, root) != 0:
            continue
        found.setdefault(psi.as_tuple(), psi)
    return list(found.values())
