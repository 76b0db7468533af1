"""Slow, independent reference computations used to derive frozen fixture values.

Nothing here imports the vectorised counting code: labelings are walked
with itertools, vertex products are formed element by element, and
permutation groups are multiplied as tuples.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def perm_mul(p, q):
    """(p*q)(i) = p(q(i)) on tuples."""
    return tuple(p[i] for i in q)


def perm_inv(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def perm_group(n):
    return [tuple(p) for p in itertools.permutations(range(n))]


def signed_product(rotation, labels, mul, inv, identity):
    acc = identity
    for edge, end in rotation:
        x = labels[edge]
        acc = mul(acc, inv(x) if end == "tail" else x)
    return acc


def naive_partition(graph: dict, elements, mul, inv, identity, chi):
    """Sum over labelings of prod_v chi(signed product at v); graph in file format."""
    edges = [e["id"] for e in graph["edges"]]
    total = 0
    for combo in itertools.product(elements, repeat=len(edges)):
        labels = dict(zip(edges, combo))
        term = 1
        for v in graph["vertices"]:
            term *= chi(signed_product(graph["rotations"][v], labels, mul, inv, identity))
            if term == 0:
                break
        total += term
    return total


def naive_flow_count(graph: dict, elements, mul, inv, identity, nowhere_identity=False):
    alphabet = [x for x in elements if not (nowhere_identity and x == identity)]
    chi = lambda x: 1 if x == identity else 0  # noqa: E731
    return naive_partition(graph, alphabet, mul, inv, identity, chi)


def naive_frobenius(elements, mul, inv, identity, cls, g):
    """#{(x1..xg, y1..yg, z) : prod [xi, yi] * z = 1, z in cls}."""
    count = 0
    for xy in itertools.product(elements, repeat=2 * g):
        acc = identity
        for i in range(g):
            x, y = xy[2 * i], xy[2 * i + 1]
            acc = mul(acc, mul(mul(x, y), mul(inv(x), inv(y))))
        count += sum(1 for z in cls if mul(acc, z) == identity)
    return count


def euler_faces(graph: dict) -> int:
    """Face count by tracing the permutation phi = rho o theta on darts."""
    rot = {v: [tuple(d) for d in graph["rotations"][v]] for v in graph["vertices"]}
    succ = {}
    for v, darts in rot.items():
        for i, d in enumerate(darts):
            succ[d] = darts[(i + 1) % len(darts)]
    flip = {"tail": "head", "head": "tail"}
    seen, faces = set(), 0
    for d in succ:
        if d in seen:
            continue
        faces += 1
        x = d
        while x not in seen:
            seen.add(x)
            x = succ[(x[0], flip[x[1]])]
    isolated = sum(1 for v in rot if not rot[v])
    return faces + isolated


def tutte_nowhere_zero(graph: dict, n: int) -> int:
    """Nowhere-zero Z_n flows by deletion/contraction-free inclusion-exclusion over edge subsets."""
    edges = graph["edges"]
    total = 0
    for r in range(len(edges) + 1):
        for keep in itertools.combinations(edges, r):
            parent = {v: v for v in graph["vertices"]}

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            comps = len(parent)
            for e in keep:
                a, b = find(e["tail"]), find(e["head"])
                if a != b:
                    parent[a] = b
                    comps -= 1
            nullity = r - len(graph["vertices"]) + comps
            total += (-1) ** (len(edges) - r) * Fraction(n) ** nullity
    return int(total)
