import pytest

from opforge.ainfinity import a_infinity_operad
from opforge.exactla import GF, QQ
from opforge.operads import (FreeOperad, OperadMorphism, TableOperad, ass_operad, check_morphism,
                             check_operad_axioms, operad_from_json, phi_morphism, uass_operad, unit_operad)
from opforge import chaincat as ch
from opforge.seqcomp import ChainBase, Sequence, SimplicialBase
from opforge.trees import catalan


@pytest.mark.parametrize("base", [ChainBase(QQ), ChainBase(GF(2)), SimplicialBase(QQ, 2)], ids=repr)
@pytest.mark.parametrize("make", [unit_operad, ass_operad, uass_operad], ids=lambda f: f.__name__)
def test_constant_operads_satisfy_axioms(base, make):
    assert check_operad_axioms(make(base, 4)) == []


def binary_free(N, degree=0, F=QQ):
    base = ChainBase(F)
    return FreeOperad(Sequence(base, N, {2: ch.sphere(degree, F, (0, max(degree, 1)))}))


def test_free_operad_on_a_binary_operation_is_catalan():
    P = binary_free(6)
    assert [sum(len(ks) for ks in P.basis(n).values()) for n in range(1, 7)] == [catalan(n - 1) for n in range(1, 7)]


def test_free_operad_grades_by_vertex_count():
    # a degree-1 generator: every binary tree with n leaves has n-1 vertices
    P = binary_free(5, degree=1)
    for n in range(1, 6):
        assert {d: len(ks) for d, ks in P.basis(n).items()} == {n - 1: catalan(n - 1)}
    assert check_operad_axioms(P, max_checks=200) == []


def test_free_operad_needs_a_bound_for_unary_generators():
    base = ChainBase(QQ)
    gens = Sequence(base, 3, {1: ch.sphere(0, QQ)})
    with pytest.raises(ValueError):
        FreeOperad(gens)
    P = FreeOperad(gens, size_bound=3)
    assert sum(len(ks) for ks in P.basis(1).values()) == 4


def doubled_ass(base, N):
    """Ass with every composite scaled by 2: associative but not unital."""
    A = ass_operad(base, N)
    F = base.field
    return TableOperad(base, N, {n: A.component(n) for n in range(N + 1)},
                       lambda p, i, q, a, b: {k: F.mul(F(2), v) for k, v in A.compose(p, i, q, a, b).items()},
                       A.unit, "2Ass")


def test_axiom_checker_catches_a_broken_unit():
    bad = check_operad_axioms(doubled_ass(ChainBase(QQ), 3))
    assert any(b.startswith("left unit") for b in bad)
    # same over a finite field
    assert check_operad_axioms(doubled_ass(ChainBase(GF(3)), 3))


def test_phi_is_a_morphism_and_zero_map_is_not():
    phi = phi_morphism(ChainBase(QQ), 4)
    assert check_morphism(phi) == []
    assert phi.is_levelwise_weak_equivalence(range(1, 5))
    zero = OperadMorphism(phi.source, phi.target, lambda n, k: {}, "zero")
    assert any("unit" in b for b in check_morphism(zero))


@pytest.mark.parametrize("make", [
    lambda: ass_operad(ChainBase(QQ), 4),
    lambda: uass_operad(SimplicialBase(GF(3), 2), 3),
    lambda: a_infinity_operad(4)[0],
], ids=["ass-chain", "uass-simplicial", "a-infinity"])
def test_json_roundtrip_preserves_dims_and_axioms(make):
    O = make()
    R = operad_from_json(O.to_json())
    for n in range(O.arity_bound + 1):
        assert {i: len(k) for i, k in R.basis(n).items()} == {i: len(k) for i, k in O.basis(n).items()}
    assert check_operad_axioms(R, max_checks=300) == []
