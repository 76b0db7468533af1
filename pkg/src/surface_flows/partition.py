"""Partition functions of group edge labelings, and flow counts.

Brute-force evaluators enumerate labelings with a mixed-radix counter
(first edge most significant) in fixed-size chunks, so sums are identical
however the chunks are distributed.  Closed forms use exact rationals
whenever their inputs are integers.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .characters import (
    ROUNDING_TOL,
    CharacterTable,
    ClassFunction,
    character_table,
    decompose,
)
from .embedding import (
    TAIL,
    EmbeddedGraph,
    GraphError,
    bouquet,
    components,
    is_connected,
    trace_faces,
)
from .groups import FiniteGroup

DEFAULT_BUDGET = 10**8
DEFAULT_SUBSET_BUDGET = 2**20
CHUNK_SIZE = 1 << 16

__all__ = [
    "BudgetExceeded",
    "CountResult",
    "EdgeLabeling",
    "abelian_flow_count",
    "bouquet",
    "count_flows",
    "count_nowhere_identity",
    "enumerate_flows",
    "frobenius_count",
    "partition_brute",
    "partition_closed",
    "partition_multiplicative",
    "partition_nowhere_identity",
    "vertex_product",
]


class BudgetExceeded(RuntimeError):
    pass


Number = Union[int, complex]


@dataclass(frozen=True)
class CountResult:
    value: Number
    method: str
    terms: int

    @property
    def is_exact(self) -> bool:
        return isinstance(self.value, int)

    def to_json(self) -> dict:
        v = self.value
        value = v if isinstance(v, int) else [v.real, v.imag]
        return {"value": value, "method": self.method, "terms": self.terms}

    def __str__(self):
        return format_number(self.value)


def format_number(v: Number) -> str:
    if isinstance(v, int):
        return str(v)
    return f"{v.real:.12g}{v.imag:+.12g}i"


@dataclass(frozen=True, eq=False)
class EdgeLabeling:
    """A total map from edge ids to group element indices."""

    graph: EmbeddedGraph
    group: FiniteGroup
    values: Mapping[str, int]

    def __post_init__(self):
        values = {k: int(v) for k, v in self.values.items()}
        missing = [e.id for e in self.graph.edges if e.id not in values]
        extra = [k for k in values if k not in self.graph.edge]
        bad = [k for k, v in values.items() if not 0 <= v < self.group.order]
        if missing or extra or bad:
            raise ValueError(
                f"invalid labeling: missing={missing} unknown={extra} out-of-range={bad}"
            )
        object.__setattr__(self, "values", values)

    @classmethod
    def from_sequence(cls, graph, group, seq: Sequence[int]) -> EdgeLabeling:
        if len(seq) != len(graph.edges):
            raise ValueError(f"need {len(graph.edges)} labels, got {len(seq)}")
        return cls(graph, group, {e.id: int(x) for e, x in zip(graph.edges, seq)})

    def __getitem__(self, edge_id: str) -> int:
        return self.values[edge_id]

    def as_tuple(self) -> tuple[int, ...]:
        return tuple(self.values[e.id] for e in self.graph.edges)

    @property
    def nowhere_identity(self) -> bool:
        return all(v != 0 for v in self.values.values())


def vertex_product(labeling: EdgeLabeling, v: str) -> int:
    """Signed product around ``v`` in rotation order (inverse on outgoing darts)."""
    g = labeling.group
    acc = 0
    for eid, end in labeling.graph.rotations[v]:
        x = labeling[eid]
        acc = g.mul(acc, g.inv(x) if end == TAIL else x)
    return acc


# -- vectorised enumeration --------------------------------------------------


def _rotation_plan(graph: EmbeddedGraph):
    pos = graph.edge_position
    return [
        [(pos[eid], end == TAIL) for eid, end in graph.rotations[v]]
        for v in graph.vertices
    ]


def _vertex_products(plan, group: FiniteGroup, labels: np.ndarray) -> np.ndarray:
    """Signed rotation products for a batch of labelings, shape (N, |V|)."""
    t, inv = group.table, group.inverse
    out = np.zeros((labels.shape[0], len(plan)), dtype=np.int64)
    for vi, darts in enumerate(plan):
        acc = np.zeros(labels.shape[0], dtype=np.int64)
        for ei, outgoing in darts:
            x = labels[:, ei]
            acc = t[acc, inv[x] if outgoing else x]
        out[:, vi] = acc
    return out


def _labels_chunk(alphabet: np.ndarray, n_edges: int, start: int, stop: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    base = len(alphabet)
    digits = np.empty((stop - start, n_edges), dtype=np.int64)
    for j in range(n_edges - 1, -1, -1):
        digits[:, j] = idx % base
        idx //= base
    return alphabet[digits]


def _chunks(total: int, chunk_size: int) -> list[tuple[int, int]]:
    return [(s, min(s + chunk_size, total)) for s in range(0, total, chunk_size)]


def _run_chunks(fn, total, chunk_size, workers):
    spans = _chunks(total, chunk_size)
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda s: fn(*s), spans))
    return [fn(*s) for s in spans]


def _check_budget(terms: int, budget: int, what: str):
    if terms > budget:
        raise BudgetExceeded(f"{what} needs {terms} terms, budget is {budget}")


def partition_brute(
    graph: EmbeddedGraph,
    group: FiniteGroup,
    chi: ClassFunction,
    *,
    budget: int = DEFAULT_BUDGET,
    chunk_size: int = CHUNK_SIZE,
    workers: Optional[int] = None,
) -> CountResult:
    """Sum over all labelings of the product of chi at every vertex."""
    if chi.group is not group:
        raise ValueError("class function belongs to a different group")
    n, n_edges = group.order, len(graph.edges)
    total = n**n_edges
    _check_budget(total, budget, "brute-force partition function")
    plan = _rotation_plan(graph)
    class_of = group.classes.class_of
    alphabet = np.arange(n, dtype=np.int64)
    ints = chi.integer_values(1e-9)
    if ints is not None:
        vals = np.array(ints, dtype=np.int64)
        bound = max(1, int(np.max(np.abs(vals))))
        use_int64 = bound ** len(graph.vertices) * chunk_size < 2**62
        if not use_int64:
            vals = np.array(ints, dtype=object)
    else:
        vals = chi.values

    def chunk(start, stop):
        labels = _labels_chunk(alphabet, n_edges, start, stop)
        weights = vals[class_of[_vertex_products(plan, group, labels)]]
        terms = np.prod(weights, axis=1) if weights.shape[1] else np.ones(len(labels), dtype=weights.dtype)
        s = terms.sum()
        return int(s) if ints is not None else complex(s)

    parts = _run_chunks(chunk, total, chunk_size, workers)
    value = sum(parts, 0 if ints is not None else 0j)
    return CountResult(value, "brute", total)


def _labeling_filter_count(graph, group, alphabet, predicate_on_products, budget, chunk_size, workers):
    n_edges = len(graph.edges)
    total = len(alphabet) ** n_edges
    _check_budget(total, budget, "brute-force enumeration")
    plan = _rotation_plan(graph)

    def chunk(start, stop):
        labels = _labels_chunk(alphabet, n_edges, start, stop)
        return int(np.count_nonzero(predicate_on_products(_vertex_products(plan, group, labels))))

    return sum(_run_chunks(chunk, total, chunk_size, workers)), total


def _all_identity(products: np.ndarray) -> np.ndarray:
    return np.all(products == 0, axis=1)


def enumerate_flows(
    graph: EmbeddedGraph,
    group: FiniteGroup,
    *,
    nowhere_identity: bool = False,
    budget: int = DEFAULT_BUDGET,
    chunk_size: int = CHUNK_SIZE,
) -> list[EdgeLabeling]:
    """Every (nowhere-identity) G-flow, in mixed-radix order."""
    alphabet = np.arange(1 if nowhere_identity else 0, group.order, dtype=np.int64)
    n_edges = len(graph.edges)
    total = len(alphabet) ** n_edges
    _check_budget(total, budget, "flow enumeration")
    plan = _rotation_plan(graph)
    flows = []
    for start, stop in _chunks(total, chunk_size):
        labels = _labels_chunk(alphabet, n_edges, start, stop)
        keep = _all_identity(_vertex_products(plan, group, labels))
        for row in labels[keep]:
            flows.append(EdgeLabeling.from_sequence(graph, group, row.tolist()))
    return flows


# -- closed forms -------------------------------------------------------------


def _integral(values, tol=ROUNDING_TOL) -> Optional[list[int]]:
    values = np.asarray(values, dtype=complex)
    rounded = np.round(values.real)
    if np.all(np.abs(values - rounded) < tol):
        return [int(x) for x in rounded]
    return None


def _as_int(q: Fraction, what: str) -> int:
    if q.denominator != 1:
        raise ArithmeticError(f"{what} evaluated to non-integer {q}")
    return q.numerator


def _closed_component(n, n_vertices, n_edges, n_faces, dims, m, m_int) -> Number:
    if m_int is not None:
        total = sum(
            Fraction(d) ** (n_faces - n_edges) * Fraction(mi) ** n_vertices
            for d, mi in zip(dims, m_int)
        )
        return _as_int(n**n_edges * total, "closed-form partition function")
    total = sum(complex(d) ** (n_faces - n_edges) * mi**n_vertices for d, mi in zip(dims, m))
    return complex(n**n_edges * total)


def _table_for(group, table):
    if table is None:
        return character_table(group)
    if table.group is not group:
        raise ValueError("character table belongs to a different group")
    table.validate()
    return table


def partition_closed(
    graph: EmbeddedGraph,
    group: FiniteGroup,
    chi: ClassFunction,
    table: Optional[CharacterTable] = None,
) -> CountResult:
    """|G|^|E| sum_l chi_l(1)^(|F|-|E|) m_l^|V| for a connected graph."""
    if not is_connected(graph):
        raise GraphError("partition_closed needs a connected graph; use partition_multiplicative")
    table = _table_for(group, table)
    m = decompose(chi, table)
    value = _closed_component(
        group.order,
        len(graph.vertices),
        len(graph.edges),
        len(trace_faces(graph)),
        table.dimensions,
        m,
        _integral(m),
    )
    return CountResult(value, "closed", len(table))


def partition_multiplicative(
    graph: EmbeddedGraph,
    group: FiniteGroup,
    chi: ClassFunction,
    table: Optional[CharacterTable] = None,
) -> CountResult:
    """Product of the closed form over connected components."""
    table = _table_for(group, table)
    value: Number = 1
    terms = 0
    for comp in components(graph):
        r = partition_closed(comp, group, chi, table)
        value = value * r.value
        terms += r.terms
    return CountResult(value, "closed", terms)


def count_flows(
    graph: EmbeddedGraph,
    group: FiniteGroup,
    method: str = "closed",
    *,
    table: Optional[CharacterTable] = None,
    budget: int = DEFAULT_BUDGET,
    chunk_size: int = CHUNK_SIZE,
    workers: Optional[int] = None,
) -> CountResult:
    """Number of G-flows; ``closed`` uses |G|^(|E|-|V|) sum_l chi_l(1)^(2-2g)."""
    if method == "brute":
        alphabet = np.arange(group.order, dtype=np.int64)
        count, terms = _labeling_filter_count(
            graph, group, alphabet, _all_identity, budget, chunk_size, workers
        )
        return CountResult(count, "brute", terms)
    if method not in ("closed", "formula"):
        raise ValueError(f"unknown method {method!r}")
    if not is_connected(graph):
        raise GraphError("closed flow count needs a connected graph")
    table = _table_for(group, table)
    chi = len(graph.vertices) - len(graph.edges) + len(trace_faces(graph))
    s = sum(Fraction(d) ** chi for d in table.dimensions)
    value = _as_int(Fraction(group.order) ** (len(graph.edges) - len(graph.vertices)) * s, "flow count")
    return CountResult(value, "closed", len(table))


# -- inclusion-exclusion over edge subsets --------------------------------------


class _SubsetTopology:
    """Component-wise (|V|, |E|, |F|) of spanning subgraphs, without rebuilding graphs.

    Darts are integers 2*i (tail) and 2*i + 1 (head) for the i-th edge; an
    arc is identified with the dart it departs through.
    """

    def __init__(self, graph: EmbeddedGraph):
        pos = graph.edge_position
        vpos = graph.vertex_position
        self.n_vertices = len(graph.vertices)
        self.n_edges = len(graph.edges)
        self.rot = [
            [2 * pos[eid] + (0 if end == TAIL else 1) for eid, end in graph.rotations[v]]
            for v in graph.vertices
        ]
        self.dart_vertex = [0] * (2 * self.n_edges)
        for vi, darts in enumerate(self.rot):
            for d in darts:
                self.dart_vertex[d] = vi
        self.ends = [(vpos[e.tail], vpos[e.head]) for e in graph.edges]

    def components(self, mask: int) -> list[tuple[int, int, int]]:
        parent = list(range(self.n_vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i in range(self.n_edges):
            if mask >> i & 1:
                a, b = find(self.ends[i][0]), find(self.ends[i][1])
                if a != b:
                    parent[max(a, b)] = min(a, b)
        succ = {}
        for darts in self.rot:
            kept = [d for d in darts if mask >> (d >> 1) & 1]
            for a, b in zip(kept, kept[1:] + kept[:1]):
                succ[a] = b
        stats: dict[int, list[int]] = {}
        for v in range(self.n_vertices):
            stats.setdefault(find(v), [0, 0, 0])[0] += 1
        for i in range(self.n_edges):
            if mask >> i & 1:
                stats[find(self.ends[i][0])][1] += 1
        seen = set()
        for d in succ:
            if d in seen:
                continue
            stats[find(self.dart_vertex[d])][2] += 1
            x = d
            while x not in seen:
                seen.add(x)
                x = succ[x ^ 1]
        for root, s in stats.items():
            if s[1] == 0:
                s[2] = 1
        return [tuple(stats[r]) for r in sorted(stats)]


def _subset_budget(graph, budget):
    _check_budget(2 ** len(graph.edges), budget, "inclusion-exclusion")


def count_nowhere_identity(
    graph: EmbeddedGraph,
    group: FiniteGroup,
    method: str = "formula",
    *,
    table: Optional[CharacterTable] = None,
    budget: Optional[int] = None,
    chunk_size: int = CHUNK_SIZE,
    workers: Optional[int] = None,
) -> CountResult:
    """Number of G-flows that never take the identity value."""
    if method == "brute":
        alphabet = np.arange(1, group.order, dtype=np.int64)
        count, terms = _labeling_filter_count(
            graph, group, alphabet, _all_identity,
            DEFAULT_BUDGET if budget is None else budget, chunk_size, workers,
        )
        return CountResult(count, "brute", terms)
    if method not in ("formula", "closed", "inclusion-exclusion"):
        raise ValueError(f"unknown method {method!r}")
    _subset_budget(graph, DEFAULT_SUBSET_BUDGET if budget is None else budget)
    table = _table_for(group, table)
    n = group.order
    dims = table.dimensions
    euler_sums: dict[int, Fraction] = {}

    def euler_sum(chi):
        if chi not in euler_sums:
            euler_sums[chi] = sum(Fraction(d) ** chi for d in dims)
        return euler_sums[chi]

    topo = _SubsetTopology(graph)
    n_edges, n_vertices = len(graph.edges), len(graph.vertices)
    total = Fraction(0)
    for mask in range(2**n_edges):
        size = bin(mask).count("1")
        term = Fraction(n) ** (size - n_vertices)
        for cv, ce, cf in topo.components(mask):
            term *= euler_sum(cv - ce + cf)
        total += -term if (n_edges - size) % 2 else term
    return CountResult(_as_int(total, "nowhere-identity flow count"), "inclusion-exclusion", 2**n_edges)


def partition_nowhere_identity(
    graph: EmbeddedGraph,
    group: FiniteGroup,
    chi: ClassFunction,
    table: Optional[CharacterTable] = None,
    *,
    budget: int = DEFAULT_SUBSET_BUDGET,
) -> CountResult:
    """Partition function restricted to labelings avoiding the identity.

    Inclusion-exclusion over spanning subgraphs, with the closed form on
    each component.
    """
    _subset_budget(graph, budget)
    table = _table_for(group, table)
    m = decompose(chi, table)
    m_int = _integral(m)
    topo = _SubsetTopology(graph)
    n_edges = len(graph.edges)
    total: Number = 0
    for mask in range(2**n_edges):
        size = bin(mask).count("1")
        term: Number = 1
        for cv, ce, cf in topo.components(mask):
            term = term * _closed_component(group.order, cv, ce, cf, table.dimensions, m, m_int)
        total += -term if (n_edges - size) % 2 else term
    return CountResult(total, "inclusion-exclusion", 2**n_edges)


def abelian_flow_count(graph: EmbeddedGraph, n: int, *, budget: int = DEFAULT_SUBSET_BUDGET) -> CountResult:
    """Nowhere-zero flows in any abelian group of order n (Tutte's count)."""
    _subset_budget(graph, budget)
    topo = _SubsetTopology(graph)
    n_edges, n_vertices = len(graph.edges), len(graph.vertices)
    total = 0
    for mask in range(2**n_edges):
        size = bin(mask).count("1")
        c = len(topo.components(mask))
        term = n ** (size - n_vertices + c)
        total += -term if (n_edges - size) % 2 else term
    return CountResult(total, "inclusion-exclusion", 2**n_edges)


# -- Frobenius counts -----------------------------------------------------------


def frobenius_count(
    group: FiniteGroup,
    class_id: int,
    g: int,
    method: str = "formula",
    *,
    table: Optional[CharacterTable] = None,
    budget: int = DEFAULT_BUDGET,
    chunk_size: int = CHUNK_SIZE,
) -> CountResult:
    """#{(x_1..x_g, y_1..y_g, z) in G^2g x C : prod [x_i, y_i] = z^-1}."""
    cls = group.classes
    if not 0 <= class_id < cls.count:
        raise IndexError(f"class id {class_id} out of range 0..{cls.count - 1}")
    if g < 0:
        raise ValueError("genus must be nonnegative")
    n, size = group.order, cls.sizes[class_id]
    if method == "brute":
        return _frobenius_brute(group, class_id, g, budget, chunk_size)
    if method not in ("formula", "closed"):
        raise ValueError(f"unknown method {method!r}")
    table = _table_for(group, table)
    vals = table.matrix[:, class_id]
    exact = _integral(vals)
    if exact is not None:
        s = sum(Fraction(v) / Fraction(d) ** (2 * g - 1) for v, d in zip(exact, table.dimensions))
        value = _as_int(Fraction(n) ** (2 * g - 1) * size * s, "Frobenius count")
        return CountResult(value, "formula", len(table))
    s = sum(v / complex(d) ** (2 * g - 1) for v, d in zip(vals, table.dimensions))
    approx = complex(n) ** (2 * g - 1) * size * s
    value = round(approx.real)
    if abs(approx - value) > ROUNDING_TOL * max(1.0, abs(value)):
        raise ArithmeticError(f"Frobenius formula gave non-integer {approx}")
    return CountResult(int(value), "formula", len(table))


def _frobenius_brute(group, class_id, g, budget, chunk_size):
    cls = group.classes
    n = group.order
    _check_budget(n ** (2 * g) * cls.sizes[class_id], budget, "brute-force Frobenius count")
    t, inv = group.table, group.inverse
    in_class = cls.class_of == class_id
    alphabet = np.arange(n, dtype=np.int64)
    total = n ** (2 * g)
    count = 0
    for start, stop in _chunks(total, chunk_size):
        xy = _labels_chunk(alphabet, 2 * g, start, stop)
        acc = np.zeros(stop - start, dtype=np.int64)
        for i in range(g):
            x, y = xy[:, 2 * i], xy[:, 2 * i + 1]
            acc = t[t[t[t[acc, x], y], inv[x]], inv[y]]
        # z = acc^-1 must lie in C
        count += int(np.count_nonzero(in_class[inv[acc]]))
    return CountResult(count, "brute", total)
