from math import comb

import pytest

from opforge import chaincat as ch
from opforge import simpcat as sv
from opforge.ainfinity import a_infinity_operad
from opforge.algebras import (AlgebraMorphism, algebra_from_json, algebra_leftproperness_trial,
                              algebra_pushout_along_free, algebra_universal_property_trial,
                              check_algebra_axioms, free_algebra, initial_algebra, rectification_check,
                              restrict_along)
from opforge.exactla import GF, QQ, TruncationError
from opforge.operads import ass_operad, phi_morphism, uass_operad
from opforge.seqcomp import ChainBase, SimplicialBase


def two_generators(F=QQ):
    # one generator in degree 0 and one in degree 1
    return ch.direct_sum([ch.sphere(0, F, (0, 1)), ch.sphere(1, F, (0, 1))])


@pytest.mark.parametrize("w", [1, 2, 3])
def test_free_ass_algebra_counts_words(w):
    a = free_algebra(ass_operad(ChainBase(QQ), w), two_generators(), w)
    # words of length n with d letters of degree 1
    expected = {}
    for n in range(1, w + 1):
        for d in range(n + 1):
            expected[d] = expected.get(d, 0) + comb(n, d)
    assert {d: k for d, k in a.carrier().graded_dims().items() if k} == expected
    assert check_algebra_axioms(a) == []


def test_free_unital_algebra_has_the_empty_word():
    a = free_algebra(uass_operad(ChainBase(QQ), 3), ch.sphere(0), 3)
    assert a.carrier().graded_dims() == {0: 4}
    assert check_algebra_axioms(a) == []


def test_free_a_infinity_and_simplicial_algebras():
    A, _ = a_infinity_operad(3, GF(3))
    assert check_algebra_axioms(free_algebra(A, ch.sphere(0, GF(3)), 3), max_checks=100) == []
    S = ass_operad(SimplicialBase(QQ, 1), 2)
    x = sv.gamma(ch.sphere(0, QQ, (0, 1)), 1)
    assert check_algebra_axioms(free_algebra(S, x, 2)) == []


def test_words_beyond_the_arity_bound_are_loud():
    a = free_algebra(ass_operad(ChainBase(QQ), 2), ch.sphere(0), 3)
    with pytest.raises(TruncationError):
        a.basis()


def test_pushout_ledgers_and_attaching_checks():
    O = ass_operad(ChainBase(QQ), 3)
    a = initial_algebra(O, 3)
    b, incl, led = algebra_pushout_along_free(a, ch.zero_into(ch.sphere(1)), lambda idx, j: {})
    assert led.identity_holds() and incl.violations() == []
    x = b.generator(b.gens[0])
    c, _, led2 = algebra_pushout_along_free(b, ch.sphere_into_disk(2), lambda idx, j: x)
    assert led2.identity_holds()
    # killing the only cycle in degree 1 kills its homology there
    assert ch.homology(c.carrier()).get(1, 0) == 0
    with pytest.raises(ValueError, match="index"):
        b.attach(ch.sphere_into_disk(1), lambda idx, j: x)
    # a degree-1 element that is not a cycle
    e = a.attach(ch.zero_into(ch.disk(1)), lambda idx, j: {})
    y1 = e.generator(next(g for g in e.gens if g[1] == 1))
    with pytest.raises(ValueError, match="commute"):
        e.attach(ch.sphere_into_disk(2), lambda idx, j: y1)


def test_non_multiplicative_map_is_caught():
    a = free_algebra(ass_operad(ChainBase(QQ), 3), ch.sphere(0), 3)
    # keep single letters, kill longer words
    m = AlgebraMorphism(a, a, lambda k: {k: QQ.one} if len(k[1][1]) == 1 else {}, "truncate")
    assert m.violations()
    assert AlgebraMorphism(a, a, lambda k: {k: QQ.one}, "id").violations() == []


def test_restriction_along_phi():
    b = free_algebra(uass_operad(ChainBase(QQ), 3), ch.sphere(0), 3)
    assert check_algebra_axioms(restrict_along(phi_morphism(ChainBase(QQ), 3), b)) == []


def test_json_roundtrip_and_tamper_detection():
    a = free_algebra(ass_operad(ChainBase(QQ), 2), ch.sphere(0), 2)
    js = a.to_json()
    assert check_algebra_axioms(algebra_from_json(js)) == []
    js["actions"][0]["values"]["0:1"] = {"0:1": "2"}
    assert any(v.startswith("unit") for v in check_algebra_axioms(algebra_from_json(js)))


@pytest.mark.parametrize("seed", range(6))
def test_trials_pass(seed):
    O = ass_operad(ChainBase(QQ), 3)
    assert algebra_leftproperness_trial(seed, O, 3)["pass"]
    up = algebra_universal_property_trial(seed, O, 3)
    assert up["pass"] and up["unique"]
    assert rectification_check(seed)["pass"]
