"""Finite groups given by Cayley tables, with elements indexed 0..n-1.

The identity is always element 0.  Groups are built from a small spec
grammar::

    cyclic:<n> | dihedral:<n> | symmetric:<n> | quaternion
    | product:<spec>,<spec> | perm:<cycles>(;<cycles>)*
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

DEFAULT_ORDER_CAP = 512
MAX_SYMMETRIC_DEGREE = 6


class GroupError(ValueError):
    """Raised for malformed group specs or invalid Cayley tables."""


@dataclass(frozen=True, eq=False)
class ConjugacyClasses:
    """Partition of a group into conjugacy classes.

    Classes are ordered by their minimal element index, so class 0 is
    always the identity class.
    """

    class_of: np.ndarray
    representatives: tuple[int, ...]
    sizes: tuple[int, ...]
    inverse_class: tuple[int, ...]
    members: tuple[tuple[int, ...], ...]

    @property
    def count(self) -> int:
        return len(self.sizes)


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group with a dense multiplication table.

    ``table[a, b]`` is the index of ``a*b``.  ``kind`` records the family a
    group was built from (``("cyclic", n)`` etc.) so that exact character
    tables can be attached to recognised families.
    """

    table: np.ndarray
    names: tuple[str, ...]
    spec: str = ""
    kind: Optional[tuple] = None
    inverse: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        table = np.ascontiguousarray(self.table, dtype=np.int64)
        n = table.shape[0]
        if table.ndim != 2 or table.shape != (n, n) or n == 0:
            raise GroupError("multiplication table must be a non-empty square array")
        if len(self.names) != n:
            raise GroupError(f"expected {n} element names, got {len(self.names)}")
        if table.min() < 0 or table.max() >= n:
            raise GroupError("multiplication table entries out of range")
        ar = np.arange(n)
        if not (np.array_equal(table[0], ar) and np.array_equal(table[:, 0], ar)):
            raise GroupError("element 0 must be the identity")
        # Each row of a group table is a permutation, so the inverse of a is
        # the unique b with table[a, b] == 0.
        rows, cols = np.nonzero(table == 0)
        if len(rows) != n or not np.array_equal(np.sort(rows), ar):
            raise GroupError("some element lacks a unique right inverse")
        inverse = np.empty(n, dtype=np.int64)
        inverse[rows] = cols
        if not np.array_equal(table[inverse, ar], np.zeros(n, dtype=np.int64)):
            raise GroupError("right inverses are not left inverses")
        table.setflags(write=False)
        inverse.setflags(write=False)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "inverse", inverse)
        if n <= DEFAULT_ORDER_CAP:
            _check_associative(table)

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def product(self, elements: Sequence[int]) -> int:
        acc = 0
        for x in elements:
            acc = int(self.table[acc, x])
        return acc

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        acc = 0
        for _ in range(k):
            acc = int(self.table[acc, a])
        return acc

    def commutator(self, a: int, b: int) -> int:
        return self.product([a, b, self.inv(a), self.inv(b)])

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = int(self.table[x, a])
            k += 1
        return k

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def classes(self) -> ConjugacyClasses:
        return conjugacy_classes(self)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise GroupError(f"no element named {name!r}") from None

    def __repr__(self):
        return f"FiniteGroup({self.spec or 'table'}, order={self.order})"


def _check_associative(table: np.ndarray) -> None:
    n = table.shape[0]
    # (ab)c == a(bc), checked one row of a at a time to bound memory.
    for a in range(n):
        left = table[table[a]]          # [b, c] -> (ab)c
        right = table[a][table]         # [b, c] -> a(bc)
        if not np.array_equal(left, right):
            raise GroupError("multiplication table is not associative")


def conjugacy_classes(group: FiniteGroup) -> ConjugacyClasses:
    """Orbits of g -> h g h^-1, ordered by minimal element index."""
    n = group.order
    t, inv = group.table, group.inverse
    # conj[h, g] = h g h^-1
    conj = t[t, inv[:, None]]
    class_of = np.full(n, -1, dtype=np.int64)
    members = []
    for g in range(n):
        if class_of[g] >= 0:
            continue
        orbit = np.unique(conj[:, g])
        class_of[orbit] = len(members)
        members.append(tuple(int(x) for x in orbit))
    inverse_class = tuple(int(class_of[inv[m[0]]]) for m in members)
    class_of.setflags(write=False)
    return ConjugacyClasses(
        class_of=class_of,
        representatives=tuple(m[0] for m in members),
        sizes=tuple(len(m) for m in members),
        inverse_class=inverse_class,
        members=tuple(members),
    )


# -- constructors ---------------------------------------------------------


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("cyclic group order must be positive")
    ar = np.arange(n)
    table = (ar[:, None] + ar[None, :]) % n
    return FiniteGroup(table, tuple(str(i) for i in range(n)), f"cyclic:{n}", ("cyclic", n))


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n; element r^i s^a has index i + n*a."""
    if n < 1:
        raise GroupError("dihedral parameter must be positive")
    size = 2 * n
    table = np.empty((size, size), dtype=np.int64)
    for x in range(size):
        i, a = x % n, x // n
        for y in range(size):
            j, b = y % n, y // n
            table[x, y] = (i + (j if a == 0 else -j)) % n + n * ((a + b) % 2)
    names = []
    for x in range(size):
        i, a = x % n, x // n
        rot = "" if i == 0 else ("r" if i == 1 else f"r^{i}")
        name = rot + ("s" if a else "")
        names.append(name or "1")
    return FiniteGroup(table, tuple(names), f"dihedral:{n}", ("dihedral", n))


def quaternion_group() -> FiniteGroup:
    """Q8 with elements ordered 1, -1, i, -i, j, -j, k, -k."""
    # unit products: (unit_a * unit_b) -> (sign, unit), units 0=1,1=i,2=j,3=k
    unit_mul = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }

    def decode(x):
        return (1 if x % 2 == 0 else -1), x // 2

    def encode(sign, unit):
        return 2 * unit + (0 if sign == 1 else 1)

    table = np.empty((8, 8), dtype=np.int64)
    for x in range(8):
        sx, ux = decode(x)
        for y in range(8):
            sy, uy = decode(y)
            s, u = unit_mul[ux, uy]
            table[x, y] = encode(sx * sy * s, u)
    names = ("1", "-1", "i", "-i", "j", "-j", "k", "-k")
    return FiniteGroup(table, names, "quaternion", ("quaternion",))


def _cycle_string(perm: Sequence[int]) -> str:
    seen = set()
    parts = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cycle = [start]
        seen.add(start)
        x = perm[start]
        while x != start:
            cycle.append(x)
            seen.add(x)
            x = perm[x]
        parts.append("(" + " ".join(str(c + 1) for c in cycle) + ")")
    return "".join(parts) or "()"


def _group_from_permutations(perms, spec, kind=None) -> FiniteGroup:
    perms = [tuple(p) for p in perms]
    index = {p: i for i, p in enumerate(perms)}
    n = len(perms)
    table = np.empty((n, n), dtype=np.int64)
    # a*b acts as "apply b, then a": (a*b)(x) = a(b(x))
    for i, a in enumerate(perms):
        for j, b in enumerate(perms):
            table[i, j] = index[tuple(a[x] for x in b)]
    names = tuple(_cycle_string(p) for p in perms)
    return FiniteGroup(table, names, spec, kind)


def symmetric_group(n: int) -> FiniteGroup:
    if n < 1 or n > MAX_SYMMETRIC_DEGREE:
        raise GroupError(f"symmetric:n requires 1 <= n <= {MAX_SYMMETRIC_DEGREE}")
    perms = list(itertools.permutations(range(n)))
    return _group_from_permutations(perms, f"symmetric:{n}", ("symmetric", n))


def _parse_cycles(text: str) -> list[list[int]]:
    text = text.strip()
    if not re.fullmatch(r"(\(\s*\d+(\s+\d+)*\s*\)\s*)*|\(\s*\)", text):
        raise GroupError(f"malformed cycle notation: {text!r}")
    cycles = []
    for body in re.findall(r"\(([^)]*)\)", text):
        points = [int(p) for p in body.split()]
        if any(p < 1 for p in points):
            raise GroupError("permutation points are numbered from 1")
        if len(set(points)) != len(points):
            raise GroupError(f"repeated point in cycle ({body})")
        cycles.append(points)
    return cycles


def permutation_group(generators: Sequence[str], *, cap: int = DEFAULT_ORDER_CAP, spec: str = "") -> FiniteGroup:
    """Close a set of cycle-notation generators under multiplication (BFS)."""
    parsed = [_parse_cycles(g) for g in generators]
    degree = max([max(c) for cycles in parsed for c in cycles] or [1])
    gens = []
    for cycles in parsed:
        perm = list(range(degree))
        for cycle in cycles:
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                perm[a - 1] = b - 1
        if sorted(perm) != list(range(degree)):
            raise GroupError("generator cycles are not disjoint")
        gens.append(tuple(perm))
    identity = tuple(range(degree))
    seen = {identity: 0}
    order = [identity]
    frontier = [identity]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(p[x] for x in g)
                if q not in seen:
                    seen[q] = len(order)
                    order.append(q)
                    nxt.append(q)
                    if len(order) > cap:
                        raise GroupError(f"generated group exceeds order cap {cap}")
        frontier = nxt
    return _group_from_permutations(order, spec or "perm:" + ";".join(generators))


def direct_product(a: FiniteGroup, b: FiniteGroup, *, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Direct product; the pair (x, y) has index x * |B| + y."""
    na, nb = a.order, b.order
    if na * nb > cap:
        raise GroupError(f"product order {na * nb} exceeds order cap {cap}")
    x = np.arange(na * nb)
    xa, xb = x // nb, x % nb
    table = a.table[xa[:, None], xa[None, :]] * nb + b.table[xb[:, None], xb[None, :]]
    names = tuple(f"({a.names[i // nb]},{b.names[i % nb]})" for i in range(na * nb))
    return FiniteGroup(table, names, f"product:{a.spec},{b.spec}", ("product", a.kind, b.kind))


# -- spec parsing ---------------------------------------------------------


def build_group(spec: str, *, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Build a validated group from a spec string such as ``"symmetric:3"``."""
    group, pos = _parse(spec.strip(), 0, cap)
    if pos != len(spec.strip()):
        raise GroupError(f"trailing text in group spec: {spec[pos:]!r}")
    return group


def _parse(s: str, pos: int, cap: int) -> tuple[FiniteGroup, int]:
    m = re.compile(r"(cyclic|dihedral|symmetric):(\d+)").match(s, pos)
    if m:
        kind, n = m.group(1), int(m.group(2))
        order = {"cyclic": n, "dihedral": 2 * n, "symmetric": _factorial(n)}[kind]
        if kind == "symmetric" and n > MAX_SYMMETRIC_DEGREE:
            raise GroupError(f"symmetric:n requires n <= {MAX_SYMMETRIC_DEGREE}")
        if order > cap:
            raise GroupError(f"group order {order} exceeds order cap {cap}")
        ctor = {"cyclic": cyclic_group, "dihedral": dihedral_group, "symmetric": symmetric_group}[kind]
        return ctor(n), m.end()
    if s.startswith("quaternion", pos):
        if 8 > cap:
            raise GroupError(f"group order 8 exceeds order cap {cap}")
        return quaternion_group(), pos + len("quaternion")
    if s.startswith("product:", pos):
        left, pos = _parse(s, pos + len("product:"), cap)
        if pos >= len(s) or s[pos] != ",":
            raise GroupError("product spec needs two factors separated by ','")
        right, pos = _parse(s, pos + 1, cap)
        return direct_product(left, right, cap=cap), pos
    if s.startswith("perm:", pos):
        end = s.find(",", pos)
        end = len(s) if end < 0 else end
        body = s[pos + len("perm:"):end]
        gens = [g for g in body.split(";")]
        if not body.strip() or any(not g.strip() for g in gens):
            raise GroupError("perm spec needs at least one generator")
        return permutation_group(gens, cap=cap, spec=s[pos:end]), end
    raise GroupError(f"malformed group spec at {s[pos:]!r}")


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out
