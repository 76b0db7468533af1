"""Directed multigraphs with rotation systems.

A dart is an ``(edge_id, end)`` pair with ``end`` in ``{"tail", "head"}``;
each edge has exactly two darts, so loops and parallel edges need no
special casing.  The rotation at a vertex is the cyclic sequence of darts
incident with it.  An arc is an ``(edge_id, direction)`` pair with
``direction`` in ``{"forward", "backward"}``; an arc leaves its start vertex
through the dart ``(edge_id, "tail")`` when forward and ``(edge_id, "head")``
when backward.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

TAIL, HEAD = "tail", "head"
FORWARD, BACKWARD = "forward", "backward"

Dart = tuple[str, str]
Arc = tuple[str, str]


class GraphError(ValueError):
    """An embedded graph violates one or more structural invariants."""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head

    def end(self, which: str) -> str:
        return self.tail if which == TAIL else self.head


def other_end(dart: Dart) -> Dart:
    return (dart[0], HEAD if dart[1] == TAIL else TAIL)


def arc_of_departing(dart: Dart) -> Arc:
    return (dart[0], FORWARD if dart[1] == TAIL else BACKWARD)


def departing_dart(arc: Arc) -> Dart:
    return (arc[0], TAIL if arc[1] == FORWARD else HEAD)


def reverse_arc(arc: Arc) -> Arc:
    return (arc[0], BACKWARD if arc[1] == FORWARD else FORWARD)


@dataclass(frozen=True, eq=False)
class EmbeddedGraph:
    """A graph with a rotation system; immutable and validated on creation."""

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    rotations: Mapping[str, tuple[Dart, ...]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(
            e if isinstance(e, Edge) else Edge(*e) for e in self.edges))
        rot = {v: tuple(tuple(d) for d in self.rotations.get(v, ())) for v in self.vertices}
        object.__setattr__(self, "rotations", rot)
        problems = _validate(self)
        if problems:
            raise GraphError(problems)

    # -- lookups --

    @cached_property
    def edge(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def edge_position(self) -> dict[str, int]:
        return {e.id: i for i, e in enumerate(self.edges)}

    @cached_property
    def vertex_position(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def successor(self) -> dict[Dart, Dart]:
        """Rotation successor of each dart at its vertex."""
        succ = {}
        for darts in self.rotations.values():
            for a, b in zip(darts, darts[1:] + darts[:1]):
                succ[a] = b
        return succ

    def vertex_of(self, dart: Dart) -> str:
        return self.edge[dart[0]].end(dart[1])

    def degree(self, v: str) -> int:
        return len(self.rotations[v])

    def arc_source(self, arc: Arc) -> str:
        return self.vertex_of(departing_dart(arc))

    def arc_target(self, arc: Arc) -> str:
        return self.vertex_of(other_end(departing_dart(arc)))

    def arc_key(self, arc: Arc) -> tuple[int, int]:
        return (self.edge_position[arc[0]], 0 if arc[1] == FORWARD else 1)

    @property
    def arcs(self) -> list[Arc]:
        return [(e.id, d) for e in self.edges for d in (FORWARD, BACKWARD)]

    def __repr__(self):
        return f"EmbeddedGraph(|V|={len(self.vertices)}, |E|={len(self.edges)})"

    def reversed_edge(self, edge_id: str) -> EmbeddedGraph:
        """Same embedding with one edge's direction flipped."""
        e = self.edge[edge_id]
        edges = [Edge(e.id, e.head, e.tail) if x.id == edge_id else x for x in self.edges]
        swap = {TAIL: HEAD, HEAD: TAIL}
        rot = {
            v: tuple((d[0], swap[d[1]]) if d[0] == edge_id else d for d in darts)
            for v, darts in self.rotations.items()
        }
        return EmbeddedGraph(self.vertices, edges, rot)

    def rerooted(self, v: str, shift: int) -> EmbeddedGraph:
        """Same embedding with the rotation at ``v`` started ``shift`` darts later."""
        rot = dict(self.rotations)
        darts = rot[v]
        if darts:
            s = shift % len(darts)
            rot[v] = darts[s:] + darts[:s]
        return EmbeddedGraph(self.vertices, self.edges, rot)


def _validate(g: EmbeddedGraph) -> list[str]:
    problems = []
    vset = set(g.vertices)
    if len(vset) != len(g.vertices):
        problems.append("duplicate vertex id")
    ids = [e.id for e in g.edges]
    if len(set(ids)) != len(ids):
        problems.append("duplicate edge id")
    edge = {}
    for e in g.edges:
        edge[e.id] = e
        for end in (e.tail, e.head):
            if end not in vset:
                problems.append(f"edge {e.id} references unknown vertex {end!r}")
    for v in g.rotations:
        if v not in vset:
            problems.append(f"rotation for unknown vertex {v!r}")
    seen = set()
    for v, darts in g.rotations.items():
        for d in darts:
            if len(d) != 2 or d[1] not in (TAIL, HEAD):
                problems.append(f"malformed dart {d!r} at {v}")
                continue
            if d[0] not in edge:
                problems.append(f"rotation at {v} references unknown edge {d[0]!r}")
                continue
            if d in seen:
                problems.append(f"duplicate dart {d!r}")
                continue
            seen.add(d)
            if edge[d[0]].end(d[1]) != v:
                problems.append(f"dart {d!r} is listed at {v} but belongs to {edge[d[0]].end(d[1])}")
    for e in g.edges:
        for end in (TAIL, HEAD):
            if (e.id, end) not in seen and e.tail in vset and e.head in vset:
                problems.append(f"rotation missing dart ({e.id}, {end})")
    return problems


# -- faces and genus --------------------------------------------------------


@dataclass(frozen=True)
class Face:
    """Facial walk as a cyclic sequence of arcs.

    An isolated vertex bounds a face with no arcs; ``anchor`` then names
    the vertex.  Otherwise ``anchor`` is the start of the first arc.
    """

    arcs: tuple[Arc, ...]
    anchor: str

    def __len__(self):
        return len(self.arcs)


def next_arc(g: EmbeddedGraph, arc: Arc) -> Arc:
    """The arc after ``arc`` on its face: leave along the rotation successor of the entry dart."""
    entry = other_end(departing_dart(arc))
    return arc_of_departing(g.successor[entry])


def trace_faces(g: EmbeddedGraph) -> list[Face]:
    faces = []
    seen = set()
    for start in sorted(g.arcs, key=g.arc_key):
        if start in seen:
            continue
        walk = []
        a = start
        while a not in seen:
            seen.add(a)
            walk.append(a)
            a = next_arc(g, a)
        faces.append(Face(tuple(walk), g.arc_source(start)))
    for v in g.vertices:
        if not g.rotations[v]:
            faces.append(Face((), v))
    return faces


def components(g: EmbeddedGraph) -> list[EmbeddedGraph]:
    """Connected components, ordered by their first vertex; vertex ids are kept."""
    parent = {v: v for v in g.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in g.edges:
        a, b = find(e.tail), find(e.head)
        if a != b:
            parent[max(a, b, key=g.vertex_position.get)] = min(a, b, key=g.vertex_position.get)
    groups: dict[str, list[str]] = {}
    for v in g.vertices:
        groups.setdefault(find(v), []).append(v)
    out = []
    for root in sorted(groups, key=g.vertex_position.get):
        vs = groups[root]
        vset = set(vs)
        es = [e for e in g.edges if e.tail in vset]
        out.append(EmbeddedGraph(tuple(vs), tuple(es), {v: g.rotations[v] for v in vs}))
    return out


def is_connected(g: EmbeddedGraph) -> bool:
    return len(g.vertices) > 0 and len(components(g)) == 1


def euler_characteristic(g: EmbeddedGraph) -> int:
    return len(g.vertices) - len(g.edges) + len(trace_faces(g))


def euler_genus(g: EmbeddedGraph) -> list[int]:
    """Genus of the surface carried by each connected component."""
    genera = []
    for comp in components(g):
        chi = euler_characteristic(comp)
        if chi % 2 or chi > 2:
            raise AssertionError(f"Euler characteristic {chi} is not 2 - 2g")
        genera.append((2 - chi) // 2)
    return genera


def genus(g: EmbeddedGraph) -> int:
    """Genus of a connected embedded graph."""
    genera = euler_genus(g)
    if len(genera) != 1:
        raise GraphError("genus() needs a connected graph; use euler_genus()")
    return genera[0]


def edge_subgraph(g: EmbeddedGraph, keep: Iterable[str]) -> EmbeddedGraph:
    """Spanning subgraph on the edges in ``keep``; rotations are restricted in order."""
    keep = set(keep)
    unknown = keep - set(g.edge)
    if unknown:
        raise GraphError([f"unknown edge id {x!r}" for x in sorted(unknown)])
    edges = tuple(e for e in g.edges if e.id in keep)
    rot = {v: tuple(d for d in darts if d[0] in keep) for v, darts in g.rotations.items()}
    return EmbeddedGraph(g.vertices, edges, rot)


# -- duals ---------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DualGraph:
    """Dual embedding together with the face and edge correspondences.

    Dual vertex ``f{i}`` is ``faces[i]``; the dual of primal edge ``e`` is
    ``to_dual[e]``.
    """

    graph: EmbeddedGraph
    primal: EmbeddedGraph
    faces: tuple[Face, ...]
    to_dual: Mapping[str, str]
    to_primal: Mapping[str, str]

    def face_of(self, dual_vertex: str) -> Face:
        return self.faces[self.graph.vertex_position[dual_vertex]]


def dual_graph(g: EmbeddedGraph) -> DualGraph:
    """Geometric dual of an embedded graph.

    The dual edge of ``e`` runs from the face containing the backward arc of
    ``e`` to the face containing its forward arc.  The rotation at a dual
    vertex lists, in facial order, the dual dart crossing each arc of the
    face.  With this orientation the facial walk of the dual around a primal
    vertex ``v`` crosses the edges at ``v`` in rotation order with exponent
    +1 on edges entering ``v`` and -1 on edges leaving it, which is exactly
    the signed product in the flow condition.
    """
    faces = trace_faces(g)
    names = [f"f{i}" for i in range(len(faces))]
    face_of_arc = {}
    for name, face in zip(names, faces):
        for a in face.arcs:
            face_of_arc[a] = name
    to_dual = {e.id: f"{e.id}*" for e in g.edges}
    edges = []
    for e in g.edges:
        edges.append(Edge(to_dual[e.id], face_of_arc[(e.id, BACKWARD)], face_of_arc[(e.id, FORWARD)]))
    rot = {}
    for name, face in zip(names, faces):
        rot[name] = tuple(
            (to_dual[a[0]], HEAD if a[1] == FORWARD else TAIL) for a in face.arcs
        )
    dual = EmbeddedGraph(tuple(names), tuple(edges), rot)
    return DualGraph(dual, g, tuple(faces), to_dual, {v: k for k, v in to_dual.items()})


# -- morphisms and coverings ---------------------------------------------------


@dataclass(frozen=True, eq=False)
class GraphMorphism:
    source: EmbeddedGraph
    target: EmbeddedGraph
    vertex_map: Mapping[str, str]
    dart_map: Mapping[Dart, Dart]

    @cached_property
    def edge_map(self) -> dict[str, str]:
        return {d[0]: img[0] for d, img in self.dart_map.items() if d[1] == TAIL}

    @classmethod
    def from_edge_map(cls, source, target, vertex_map, edge_map) -> GraphMorphism:
        darts = {}
        for e, img in edge_map.items():
            darts[(e, TAIL)] = (img, TAIL)
            darts[(e, HEAD)] = (img, HEAD)
        return cls(source, target, dict(vertex_map), darts)

    @classmethod
    def identity(cls, g: EmbeddedGraph) -> GraphMorphism:
        return cls.from_edge_map(g, g, {v: v for v in g.vertices}, {e.id: e.id for e in g.edges})

    def compose(self, after: GraphMorphism) -> GraphMorphism:
        """``after`` applied to the result of ``self``."""
        return GraphMorphism(
            self.source,
            after.target,
            {v: after.vertex_map[w] for v, w in self.vertex_map.items()},
            {d: after.dart_map[x] for d, x in self.dart_map.items()},
        )


@dataclass
class CoveringReport:
    ok: bool
    violations: list[str]

    def __bool__(self):
        return self.ok


def check_covering(m: GraphMorphism) -> CoveringReport:
    """Decide whether ``m`` is a covering map of rotation systems.

    It must be surjective on vertices and, at every source vertex, map the
    rotation bijectively onto the rotation at the image vertex, preserving
    dart ends and cyclic order.
    """
    src, tgt = m.source, m.target
    bad = []
    for v in src.vertices:
        if v not in m.vertex_map:
            bad.append(f"vertex {v} has no image")
        elif m.vertex_map[v] not in tgt.vertex_position:
            bad.append(f"vertex {v} maps to unknown vertex {m.vertex_map[v]!r}")
    for e in src.edges:
        images = [m.dart_map.get((e.id, end)) for end in (TAIL, HEAD)]
        if None in images:
            bad.append(f"edge {e.id} has an unmapped dart")
            continue
        (ta, ea), (tb, eb) = images
        if ta != tb or ta not in tgt.edge or ea != TAIL or eb != HEAD:
            bad.append(f"edge {e.id} darts do not map to the two ends of one edge with direction kept")
    if bad:
        return CoveringReport(False, bad)
    missing = set(tgt.vertices) - set(m.vertex_map.values())
    if missing:
        bad.append(f"not surjective: {sorted(missing, key=tgt.vertex_position.get)} not covered")
    for v in src.vertices:
        w = m.vertex_map[v]
        rot_v = [m.dart_map[d] for d in src.rotations[v]]
        rot_w = list(tgt.rotations[w])
        for d in rot_v:
            if tgt.vertex_of(d) != w:
                bad.append(f"dart at {v} maps to a dart not at {w}")
                break
        if len(rot_v) != len(rot_w):
            bad.append(f"degree mismatch at {v}: {len(rot_v)} vs {len(rot_w)} at {w}")
            continue
        if not rot_w:
            continue
        if len(set(rot_v)) != len(rot_v) or set(rot_v) != set(rot_w):
            bad.append(f"rotation at {v} is not mapped bijectively onto rotation at {w}")
            continue
        s = rot_w.index(rot_v[0])
        if rot_w[s:] + rot_w[:s] != rot_v:
            bad.append(f"cyclic order not preserved at {v}")
    return CoveringReport(not bad, bad)


def find_isomorphism(a: EmbeddedGraph, b: EmbeddedGraph, *, allow_reversal: bool = True) -> Optional[GraphMorphism]:
    """Search for an isomorphism of rotation systems from ``a`` to ``b``.

    A map isomorphism is fixed by the image of one dart per component, so
    the search tries every dart of ``b`` for the first dart of ``a``.  When
    ``allow_reversal`` is set, edge directions may be flipped; the returned
    morphism then maps darts by position, not by end label.  Connected
    graphs only.
    """
    if len(a.vertices) != len(b.vertices) or len(a.edges) != len(b.edges):
        return None
    if not a.edges:
        if len(a.vertices) == 1:
            return GraphMorphism(a, b, {a.vertices[0]: b.vertices[0]}, {})
        return None
    darts_a = [(e.id, end) for e in a.edges for end in (TAIL, HEAD)]
    darts_b = [(e.id, end) for e in b.edges for end in (TAIL, HEAD)]
    for target in darts_b:
        phi = {darts_a[0]: target}
        stack = [darts_a[0]]
        ok = True
        while stack and ok:
            d = stack.pop()
            img = phi[d]
            for nd, nimg in ((a.successor[d], b.successor[img]), (other_end(d), other_end(img))):
                if nd in phi:
                    if phi[nd] != nimg:
                        ok = False
                        break
                else:
                    phi[nd] = nimg
                    stack.append(nd)
        if not ok or len(phi) != len(darts_a) or len(set(phi.values())) != len(darts_b):
            continue
        if not allow_reversal and any(d[1] != img[1] for d, img in phi.items()):
            continue
        vmap = {}
        for d, img in phi.items():
            v, w = a.vertex_of(d), b.vertex_of(img)
            if vmap.setdefault(v, w) != w:
                ok = False
                break
        if ok and len(set(vmap.values())) == len(vmap) == len(a.vertices):
            return GraphMorphism(a, b, vmap, phi)
    return None


# -- export ----------------------------------------------------------------------


def to_dot(g: EmbeddedGraph, name: str = "H") -> str:
    """DOT text; rotation order is recorded as a vertex attribute."""
    lines = [f"digraph {name} {{"]
    for v in g.vertices:
        rot = " ".join(f"{e}:{end[0]}" for e, end in g.rotations[v])
        lines.append(f'  "{v}" [rotation="{rot}"];')
    for e in g.edges:
        lines.append(f'  "{e.tail}" -> "{e.head}" [label="{e.id}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def bouquet(g: int) -> EmbeddedGraph:
    """One vertex with 2g loops whose rotation a1 b1 a1' b1' ... gives genus g."""
    if g < 0:
        raise ValueError("genus must be nonnegative")
    edges = []
    rot = []
    for i in range(1, g + 1):
        a, b = f"a{i}", f"b{i}"
        edges += [Edge(a, "v", "v"), Edge(b, "v", "v")]
        rot += [(a, TAIL), (b, TAIL), (a, HEAD), (b, HEAD)]
    return EmbeddedGraph(("v",), tuple(edges), {"v": tuple(rot)})


def from_adjacency(vertices: Sequence[str], edges: Sequence[tuple[str, str, str]], rotation_edges: Mapping[str, Sequence[str]]) -> EmbeddedGraph:
    """Build a graph from per-vertex edge orders (loops are not allowed here)."""
    edge_objs = [Edge(*e) for e in edges]
    by_id = {e.id: e for e in edge_objs}
    rot = {}
    for v, order in rotation_edges.items():
        darts = []
        for eid in order:
            e = by_id[eid]
            if e.is_loop:
                raise GraphError("from_adjacency cannot place loops; give darts explicitly")
            darts.append((eid, TAIL if e.tail == v else HEAD))
        rot[v] = tuple(darts)
    return EmbeddedGraph(tuple(vertices), tuple(edge_objs), rot)


def disjoint_union(*graphs: EmbeddedGraph) -> EmbeddedGraph:
    vertices = tuple(itertools.chain.from_iterable(g.vertices for g in graphs))
    edges = tuple(itertools.chain.from_iterable(g.edges for g in graphs))
    rot = {}
    for g in graphs:
        rot.update(g.rotations)
    return EmbeddedGraph(vertices, edges, rot)
