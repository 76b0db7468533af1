import numpy as np
import pytest

from surface_flows import build_group
from surface_flows.characters import (
    CharacterError,
    ClassFunction,
    character_table,
    class_indicator,
    class_sum_matrices,
    decompose,
    inner_product,
    recompose,
    regular_character,
    trivial_character,
)

GROUPS = ["cyclic:1", "cyclic:7", "dihedral:4", "dihedral:5", "quaternion", "symmetric:3", "symmetric:4",
          "product:cyclic:2,symmetric:3", "perm:(1 2 3);(1 2)(3 4)"]


@pytest.mark.parametrize("spec", GROUPS)
def test_irreducibles_are_orthonormal(spec):
    table = character_table(build_group(spec))
    gram = np.array([[inner_product(a, b) for b in table.characters] for a in table.characters])
    assert np.allclose(gram, np.eye(len(table)), atol=1e-9)
    assert len(table) == table.group.classes.count


def test_dimension_multisets():
    assert sorted(character_table(build_group("symmetric:3")).dimensions) == [1, 1, 2]
    assert sorted(character_table(build_group("quaternion")).dimensions) == [1, 1, 1, 1, 2]
    assert sorted(character_table(build_group("dihedral:4")).dimensions) == [1, 1, 1, 1, 2]


@pytest.mark.parametrize("spec", GROUPS)
def test_regular_character_decomposes_by_dimension(spec):
    table = character_table(build_group(spec))
    m = decompose(regular_character(table.group), table)
    assert np.allclose(m, table.dimensions, atol=1e-9)


def test_class_indicator_values_s3():
    s3 = build_group("symmetric:3")
    t = s3.classes.class_of[s3.index("(1 2)")]
    f = class_indicator(s3, t)
    expected = np.zeros(3)
    expected[t] = 2
    assert np.allclose(f.values, expected)
    with pytest.raises(IndexError):
        class_indicator(s3, 3)


@pytest.mark.parametrize("spec", GROUPS)
def test_indicator_decomposes_to_inverse_class_values(spec):
    g = build_group(spec)
    table = character_table(g)
    for c in range(g.classes.count):
        m = decompose(class_indicator(g, c), table)
        expected = table.matrix[:, g.classes.inverse_class[c]]
        assert np.allclose(m, expected, atol=1e-9)


def test_three_cycle_indicator_multiplicities():
    s3 = build_group("symmetric:3")
    table = character_table(s3)
    c = s3.classes.class_of[s3.index("(1 2 3)")]
    m = decompose(class_indicator(s3, c), table)
    # rows ordered trivial, sign, standard
    assert np.allclose(m, [1, 1, -1])


def test_recompose_inverts_decompose():
    g = build_group("dihedral:5")
    table = character_table(g)
    rng = np.random.default_rng(3)
    chi = ClassFunction(g, rng.normal(size=g.classes.count) + 1j * rng.normal(size=g.classes.count))
    back = recompose(decompose(chi, table), table)
    assert np.allclose(back.values, chi.values)


def test_class_function_algebra():
    g = build_group("symmetric:3")
    reg, triv = regular_character(g), trivial_character(g)
    s = reg + triv * 2
    assert s(0) == 8 and s(1) == 2
    assert s.integer_values() == [8, 2, 2]
    assert np.allclose(s.on_elements(), [s(x) for x in range(6)])
    with pytest.raises(ValueError):
        ClassFunction(g, [1, 2])


def test_numeric_agrees_with_exact():
    for spec in ["cyclic:12", "dihedral:6", "quaternion", "symmetric:4"]:
        g = build_group(spec)
        exact = character_table(g, "exact")
        numeric = character_table(g, "numeric", seed=5)
        assert exact.method == "exact" and numeric.method == "numeric"
        for row in exact.matrix:
            assert min(np.abs(numeric.matrix - row).max(axis=1)) < 1e-9


def test_numeric_tables_for_groups_without_formula():
    for spec in ["symmetric:5", "product:dihedral:3,quaternion", "perm:(1 2 3 4 5);(1 2)"]:
        g = build_group(spec, cap=200)
        table = character_table(g)
        assert table.method == "numeric"
        assert sum(d * d for d in table.dimensions) == g.order
        table.validate()


def test_exact_unavailable_raises():
    with pytest.raises(CharacterError):
        character_table(build_group("product:cyclic:2,cyclic:2"), "exact")
    with pytest.raises(ValueError):
        character_table(build_group("cyclic:2"), "guess")


def test_class_sum_structure_constants():
    g = build_group("symmetric:3")
    c = class_sum_matrices(g)
    k = g.classes.count
    assert c.shape == (k, k, k)
    # identity class acts as identity
    assert np.array_equal(c[0], np.eye(k))
    # C_r C_s = sum_t c[r, s, t] C_t: total size bookkeeping
    sizes = np.array(g.classes.sizes)
    for r in range(k):
        for s in range(k):
            assert c[r, s] @ sizes == sizes[r] * sizes[s]
