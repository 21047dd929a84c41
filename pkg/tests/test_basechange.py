import random

import pytest

from opforge import chaincat as ch
from opforge.ainfinity import a_infinity_operad
from opforge.algebras import check_algebra_axioms, free_algebra
from opforge.basechange import (DoldKan, ScalarExtension, adjoint_transfer_check, arrow_comparison_check,
                                chi_naturality, chi_report, f_oper, invariance_experiment,
                                iterated_comultiplication_check, transport_algebra)
from opforge.cellular import pushout_along_free
from opforge.exactla import GF, QQ
from opforge.operads import OperadMorphism, ass_operad, check_operad_axioms, unit_operad
from opforge.seqcomp import ChainBase
from opforge.trees import catalan
from opforge.trials import random_cellular_operad


@pytest.fixture(scope="module")
def strong():
    return ScalarExtension(3)


@pytest.fixture(scope="module")
def dk():
    return DoldKan(QQ, 2)


class BrokenCounit(ScalarExtension):
    def counit_map(self, Z):
        m = super().counit_map(Z)
        two = self.target.field(2)
        return ch.ChainMap(m.source, m.target, {d: M.scale(two) for d, M in m.comps.items()}, check=False)


def test_broken_coherence_is_refused():
    with pytest.raises(ValueError, match="coherence"):
        BrokenCounit(3)


def binary_cell_operad(F, N):
    P, _, _ = pushout_along_free(unit_operad(ChainBase(F), N), {2: ch.zero_into(ch.sphere(0, F))}, {2: lambda i, j: {}})
    return P


def test_f_oper_of_a_free_operad_is_free(strong):
    Fo = f_oper(strong, binary_cell_operad(GF(3), 5))
    assert Fo.field == strong.target.field
    assert [sum(len(k) for k in Fo.basis(n).values()) for n in range(1, 6)] == [catalan(n - 1) for n in range(1, 6)]


def test_chi_is_invertible_for_the_strong_instance(strong):
    A, _ = a_infinity_operad(4, GF(3))
    rep = chi_report(strong, A)
    assert all(r["invertible"] for r in rep["per_arity"])
    assert chi_naturality(strong, A)
    assert check_operad_axioms(f_oper(strong, A), max_checks=100) == []


@pytest.mark.parametrize("seed", range(4))
def test_chi_is_a_weak_equivalence_for_dold_kan(dk, seed):
    O, _ = random_cellular_operad(random.Random(seed), 3, QQ)
    rep = chi_report(dk, O)
    assert all(r["weak_equivalence"] for r in rep["per_arity"])


def test_invariance_for_both_instances(strong):
    for adj, n in ((strong, 4), (DoldKan(QQ, 3), 3)):
        rep = invariance_experiment(adj, n)
        assert rep["verdict"] == "pass"
        assert rep["per_arity"][0]["zero_to_zero"]


def test_adjoint_transfer_only_for_equivalences(strong, dk):
    A, _ = a_infinity_operad(3, QQ)
    Fo = f_oper(dk, A)
    ident = OperadMorphism(Fo, Fo, lambda n, k: {k: QQ.one})
    rows = adjoint_transfer_check(dk, A, Fo, ident)
    assert all(a == b for a, b in rows)
    A3, _ = a_infinity_operad(3, GF(3))
    F3 = f_oper(strong, A3)
    with pytest.raises(ValueError, match="not a Quillen equivalence"):
        adjoint_transfer_check(strong, A3, F3, OperadMorphism(F3, F3, lambda n, k: {k: F3.field.one}))


def test_transported_algebra_is_an_algebra(strong):
    x = strong.F_obj(ch.sphere(0, GF(3)))
    b = free_algebra(ass_operad(strong.target, 2), x, 2)
    assert check_algebra_axioms(transport_algebra(strong, b), max_checks=50) == []


def test_comultiplication_and_arrow_comparison(dk):
    xs = [ch.sphere(1, QQ, (0, 2)), ch.disk(1, QQ, (0, 2))]
    assert iterated_comultiplication_check(dk, xs)
    assert arrow_comparison_check(dk, [ch.sphere_into_disk(1, QQ, (0, 2))], [ch.sphere(0, QQ, (0, 2))])["pass"]
