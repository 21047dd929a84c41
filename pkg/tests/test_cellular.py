import copy
import random

import pytest

from opforge import chaincat as ch
from opforge import simpcat as sv
from opforge.ainfinity import a_infinity_boundary, a_infinity_operad
from opforge.cellular import CellOperad, mediator_is_unique, pushout_along_free
from opforge.exactla import GF, QQ, TruncationError
from opforge.harness import PUSHOUT_PRESETS, pushout_from_spec
from opforge.operads import FreeOperad, OperadMorphism, check_morphism, lin_add, check_operad_axioms, unit_operad
from opforge.seqcomp import ChainBase, Sequence, SimplicialBase
from opforge.trees import associahedron_dims, catalan
from opforge.trials import random_cells, random_cellular_operad, universal_property_trial


def total_dims(O):
    return [sum(len(ks) for ks in O.basis(n).values()) for n in range(1, O.arity_bound + 1)]


def free_binary_pushout(N, F=QQ):
    I = unit_operad(ChainBase(F), N)
    return pushout_along_free(I, {2: ch.zero_into(ch.sphere(0, F))}, {2: lambda idx, j: {}})


def test_catalan_two_ways():
    P, fp, led = free_binary_pushout(6)
    free = FreeOperad(Sequence(ChainBase(QQ), 6, {2: ch.sphere(0, QQ)}))
    assert total_dims(P) == total_dims(free) == [catalan(n - 1) for n in range(1, 7)]
    assert led.identity_holds() and led.verify_layers()
    assert check_morphism(fp) == []


def test_ledger_rows_follow_trees():
    _, _, led = free_binary_pushout(4)
    rows = led.csv_rows()
    totals = {r["arity"]: r["cokernel_dims"] for r in rows if r["layer"] == "total"}
    assert totals == {0: "0", 1: "0", 2: "1", 3: "2", 4: "5"}
    # arity 3: one layer-2 row per leveled tree, two trees
    assert sum(1 for r in rows if r["arity"] == 3 and r["layer"] == 2) == 2


def test_tampered_ledger_fails_identity():
    _, _, led = free_binary_pushout(4)
    bad = copy.copy(led)
    bad.rows = copy.deepcopy(led.rows)
    bad.rows[4][-1]["cokernel_dims"] = {0: 4}
    assert not bad.identity_holds()


@pytest.mark.parametrize("preset", ["free-binary", "identity", "trivial-cell"])
def test_presets_satisfy_ledger(preset):
    P, led = pushout_from_spec(PUSHOUT_PRESETS[preset])
    assert led.identity_holds() and led.verify_layers()
    if preset == "identity":
        assert all(r["cokernel_dims"] == "0" for r in led.csv_rows() if r["layer"] == "total")


@pytest.mark.parametrize("n", range(2, 6))
def test_a_infinity_components(n):
    A, q = a_infinity_operad(n)
    C = A.component(n)
    assert not C.d_squared_violations()
    assert {d: k for d, k in C.graded_dims().items() if k} == associahedron_dims(n)
    assert ch.homology(C) == {0: 1}
    assert q.is_levelwise_weak_equivalence(range(1, n + 1))


def test_a_infinity_boundary_is_a_cycle_and_operad_axioms_hold():
    A, q = a_infinity_operad(5, GF(5))
    for n in range(3, 6):
        dbd = {}
        for k, c in a_infinity_boundary(A, n).items():
            lin_add(A.field, dbd, A.act(n, k, "d"), c)
        assert dbd == {}
    assert check_operad_axioms(A, max_checks=300) == []
    assert check_morphism(q, max_checks=300) == []


@pytest.mark.parametrize("seed", range(5))
def test_mediator_exists_and_is_unique(seed):
    rep = universal_property_trial(seed, 3, QQ)
    assert rep["pass"] and rep["unique"]


def test_identity_is_the_unique_self_mediator():
    P, fp, led = free_binary_pushout(4)
    ident = OperadMorphism.identity(P)
    assert mediator_is_unique(P, ident, list(P.gens))


def test_attach_rejects_bad_cells():
    P = CellOperad(unit_operad(ChainBase(QQ), 3))
    with pytest.raises(TruncationError):
        P.attach(4, ch.zero_into(ch.sphere(0)), lambda idx, j: {})
    S = ch.sphere(1)
    collapse = ch.ChainMap(S, ch.zero_complex(QQ, (1, 1)), {})
    with pytest.raises(ValueError):
        P.attach(2, collapse, lambda idx, j: {})
    with pytest.raises(TruncationError):
        P.attach(1, ch.zero_into(ch.sphere(0)), lambda idx, j: {})


def test_simplicial_pushout_ledger():
    base = SimplicialBase(QQ, 2)
    I = unit_operad(base, 4)
    f = sv.gamma_map(ch.zero_into(ch.sphere(0, QQ, (0, 2))), 2)
    P, _, led = pushout_along_free(I, {2: f}, {2: lambda idx, j: {}})
    assert led.identity_holds()
    # three levels, each a copy of the Catalan numbers
    assert total_dims(P) == [3 * catalan(n - 1) for n in range(1, 5)]


def test_random_pushouts_keep_the_ledger():
    for seed in range(10):
        rng = random.Random(seed)
        O, _ = random_cellular_operad(rng, 3, QQ, steps=1)
        f, g, _ = random_cells(O, rng)
        _, _, led = pushout_along_free(O, f, g)
        assert led.verify_layers()
