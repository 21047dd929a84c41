from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from opforge.trees import (LEAF, arities, associahedron_dims, catalan, enumerate_leveled_trees,
                           enumerate_planar_trees, from_nested, graft, leaves, to_nested,
                           tree_degree_and_dims, vertex_count)


def kirkman_cayley(n, k):
    """Planar trees with n leaves, k vertices, all arities >= 2 (dissections of an (n+1)-gon)."""
    return Fraction(comb(n - 2, k - 1) * comb(n + k - 1, k - 1), k)


def associahedron_oracle(n):
    return {n - k - 1: int(kirkman_cayley(n, k)) for k in range(1, n)}


@pytest.mark.parametrize("n", range(0, 12))
def test_catalan_closed_form(n):
    assert catalan(n) == comb(2 * n, n) // (n + 1)


@pytest.mark.parametrize("n", range(1, 8))
def test_binary_trees_are_catalan(n):
    ts = enumerate_planar_trees(n, [2])
    assert len(ts) == catalan(n - 1)
    assert len({repr(t) for t in ts}) == len(ts)
    assert all(leaves(t) == n and set(arities(t)) <= {2} for t in ts)


@pytest.mark.parametrize("n", range(2, 8))
def test_associahedron_face_counts(n):
    assert associahedron_dims(n) == associahedron_oracle(n)


def test_small_associahedra():
    assert associahedron_dims(3) == {0: 2, 1: 1}
    assert associahedron_dims(4) == {0: 5, 1: 5, 2: 1}


def test_unary_vertices_need_a_bound():
    with pytest.raises(ValueError):
        enumerate_planar_trees(2, [1, 2])
    # a chain of up to two unary vertices above or below the binary one
    ts = enumerate_planar_trees(2, [1, 2], max_vertices=2)
    assert len(ts) == 1 + 3


def corollas():
    return st.integers(0, 4).map(lambda k: tuple([LEAF] * k))


@given(s=corollas().filter(lambda t: len(t) > 0), t=corollas(), data=st.data())
def test_grafting_adds_leaves_and_vertices(s, t, data):
    i = data.draw(st.integers(1, leaves(s)))
    g = graft(s, i, t)
    assert leaves(g) == leaves(s) + leaves(t) - 1
    assert vertex_count(g) == vertex_count(s) + vertex_count(t)
    with pytest.raises(IndexError):
        graft(s, leaves(s) + 1, t)


def test_nested_roundtrip():
    for t in enumerate_planar_trees(5, [2, 3]):
        assert from_nested(to_nested(t)) == t
    with pytest.raises(ValueError):
        from_nested([3, LEAF, LEAF])


def test_leveled_trees_without_even_vertices_are_corollas():
    for n in range(5):
        assert enumerate_leveled_trees(n, 0, [2]) == [("o", tuple([LEAF] * n))]
    assert enumerate_leveled_trees(3, 0, [2], odd_arity_support=[2]) == []


@pytest.mark.parametrize("n", range(0, 5))
def test_leveled_trees_with_one_binary_even_vertex(n):
    # root corolla with one even slot; below it two odd corollas taking s leaves in total
    expected = sum((s + 1) * (n - s + 1) for s in range(n + 1))
    ts = enumerate_leveled_trees(n, 1, [2])
    assert len(ts) == expected
    for T in ts:
        assert leaves(T) == n


def test_tree_degree_and_dims_multiplies_decorations():
    t = ((LEAF, LEAF), LEAF)
    assert tree_degree_and_dims(t, {2: {0: 2, 1: 1}}) == {0: 4, 1: 4, 2: 1}
    T = ("o", (("e", (("o", ()), ("o", (LEAF,)))), LEAF))
    assert tree_degree_and_dims(T, {2: {1: 1}}, {0: {0: 1}, 1: {0: 1}, 2: {0: 1}}) == {1: 1}
