import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracle import perm_group, perm_inv, perm_mul
from surface_flows.groups import (
    GroupError,
    build_group,
    cyclic_group,
    direct_product,
    permutation_group,
    quaternion_group,
)

SPECS = [
    "cyclic:1", "cyclic:5", "dihedral:3", "dihedral:4", "quaternion", "symmetric:3",
    "symmetric:4", "product:cyclic:2,cyclic:2", "product:quaternion,cyclic:3", "perm:(1 2 3);(1 2)(3 4)",
]


@pytest.mark.parametrize("spec", SPECS)
def test_group_axioms(spec):
    g = build_group(spec)
    t, n = g.table, g.order
    assert (t[0] == np.arange(n)).all() and (t[:, 0] == np.arange(n)).all()
    for a in range(n):
        assert t[a, g.inv(a)] == 0 == t[g.inv(a), a]
    a, b, c = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    assert (t[t[a, b], c] == t[a, t[b, c]]).all()
    assert sorted(set(t.flatten())) == list(range(n))


def test_s3_orders_and_classes():
    s3 = build_group("symmetric:3")
    assert s3.order == 6
    assert s3.classes.count == 3
    assert sorted(s3.classes.sizes) == [1, 2, 3]


def test_quaternion_classes():
    q = build_group("quaternion")
    assert q.order == 8 and q.classes.count == 5
    assert sorted(q.classes.sizes) == [1, 1, 2, 2, 2]
    i, j, k = (q.index(x) for x in "ijk")
    minus_one = q.index("-1")
    assert q.mul(i, i) == q.mul(j, j) == q.mul(k, k) == q.product([i, j, k]) == minus_one


def test_s3_classes_match_permutation_oracle():
    """Class sizes of S3 and S4 agree with conjugation computed on permutation tuples."""
    for n in (3, 4):
        elems = perm_group(n)
        seen, sizes = set(), []
        for x in elems:
            if x in seen:
                continue
            cls = {perm_mul(perm_mul(g, x), perm_inv(g)) for g in elems}
            seen |= cls
            sizes.append(len(cls))
        assert sorted(build_group(f"symmetric:{n}").classes.sizes) == sorted(sizes)


@pytest.mark.parametrize("spec", SPECS)
def test_class_invariants(spec):
    g = build_group(spec)
    cls = g.classes
    assert sum(cls.sizes) == g.order
    assert cls.members[0] == (0,)
    assert all(cls.inverse_class[cls.inverse_class[c]] == c for c in range(cls.count))
    for c, members in enumerate(cls.members):
        assert cls.class_of[cls.representatives[c]] == c
        for x in members:
            assert cls.class_of[g.inv(x)] == cls.inverse_class[c]
            for h in range(g.order):
                assert cls.class_of[g.product([h, x, g.inv(h)])] == c


def test_abelian_flags():
    assert build_group("cyclic:6").is_abelian
    assert build_group("product:cyclic:2,cyclic:2").is_abelian
    assert not build_group("dihedral:3").is_abelian
    assert build_group("product:cyclic:2,cyclic:2").classes.count == 4


def test_direct_product_orders():
    p = direct_product(cyclic_group(2), quaternion_group())
    assert p.order == 16
    assert p.classes.count == 10


def test_permutation_closure_gives_a4():
    a4 = permutation_group(["(1 2 3)", "(1 2)(3 4)"])
    assert a4.order == 12 and a4.classes.count == 4


def test_power_and_element_order():
    g = build_group("dihedral:6")
    r = g.index("r")
    assert g.element_order(r) == 6
    assert g.power(r, 6) == 0 and g.power(r, -1) == g.inv(r)
    assert g.commutator(r, g.index("s")) != 0


@pytest.mark.parametrize("spec", [
    "cyclic", "cyclic:0", "cyclic:x", "symmetric:7", "bogus:3", "product:cyclic:2", "perm:", "cyclic:2 junk",
])
def test_malformed_specs(spec):
    with pytest.raises(GroupError):
        build_group(spec)


def test_order_cap():
    with pytest.raises(GroupError, match="cap"):
        build_group("cyclic:1000")
    with pytest.raises(GroupError, match="cap"):
        build_group("cyclic:10", cap=5)
    assert build_group("cyclic:1000", cap=1000).order == 1000


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SPECS), st.data())
def test_inverse_of_product(spec, data):
    g = build_group(spec)
    xs = data.draw(st.lists(st.integers(0, g.order - 1), min_size=1, max_size=5))
    inv_prod = g.product([g.inv(x) for x in reversed(xs)])
    assert g.mul(g.product(xs), inv_prod) == 0


def test_symmetric_matches_tuple_multiplication():
    g = build_group("symmetric:3")
    elems = perm_group(3)
    # translate by multiplication structure: the map must be a bijective homomorphism for some ordering,
    # so compare the multisets of element orders instead of a specific labelling.
    def order_of(p):
        k, q = 1, p
        while q != tuple(range(3)):
            q, k = perm_mul(q, p), k + 1
        return k
    assert sorted(order_of(p) for p in elems) == sorted(g.element_order(x) for x in range(6))
    assert list(itertools.islice(g.names, 1)) == ["()"]
