from itertools import product

import pytest

from opforge import chaincat as ch
from opforge import simpcat as sv
from opforge.exactla import GF, QQ, TruncationError
from opforge.operads import ass_operad, uass_operad
from opforge.seqcomp import (ChainBase, SimplicialBase, Sequence, compose_product, compositions,
                             unit_sequence)


def brute_compositions(n):
    # cut or don't cut each of the n-1 gaps between n points
    out = []
    for cuts in product((0, 1), repeat=max(n - 1, 0)):
        parts, run = [], 1
        for c in cuts:
            if c:
                parts.append(run)
                run = 0
            run += 1
        parts.append(run)
        out.append(tuple(parts))
    return out


@pytest.mark.parametrize("n", range(1, 9))
def test_compositions_agree_with_gap_cutting(n):
    ours = [p for m in range(1, n + 1) for p in compositions(n, m)]
    assert sorted(ours) == sorted(brute_compositions(n))


@pytest.mark.parametrize("F", [QQ, GF(2)], ids=lambda F: F.tag)
def test_ass_compose_ass_counts_compositions(F):
    base = ChainBase(F)
    A = ass_operad(base, 8).underlying()
    s = compose_product(A, A)
    for n in range(1, 9):
        assert base.size(s[n]) == len(brute_compositions(n))
        assert len(s.summands[n]) == len(brute_compositions(n))


def test_unit_sequence_is_a_two_sided_unit():
    base = ChainBase(QQ)
    A = ass_operad(base, 5).underlying()
    I = unit_sequence(base, 5)
    assert compose_product(I, A).dims() == A.dims()
    assert compose_product(A, I).dims() == A.dims()


def test_reduced_policy_rejects_arity_zero():
    base = ChainBase(QQ)
    U = uass_operad(base, 4).underlying()
    with pytest.raises(ValueError):
        compose_product(U, U)
    s = compose_product(U, U, policy=("bounded", 3))
    # uAss o uAss in arity 0: one summand per m <= 3, each a copy of the ground field
    assert base.size(s[0]) == 4


def test_bounded_policy_checks_the_bound():
    base = ChainBase(QQ)
    U = uass_operad(base, 2).underlying()
    with pytest.raises(TruncationError):
        compose_product(U, U, policy=("bounded", 5))
    with pytest.raises(TruncationError):
        U[3]


def test_graded_dims_add_under_tensor():
    base = ChainBase(QQ, (0, 4))
    S = ch.sphere(1, QQ, (0, 4))
    u = Sequence(base, 3, {2: S})
    v = Sequence(base, 3, {1: S})
    s = compose_product(u, v)
    assert s.dims()[2] == {3: 1}


def test_simplicial_base_composition_and_json():
    base = SimplicialBase(QQ, 2)
    A = ass_operad(base, 4).underlying()
    s = compose_product(A, A)
    # constant objects: one copy per simplicial level 0..2
    assert [base.size(s[n]) for n in range(1, 5)] == [3 * 2 ** (n - 1) for n in range(1, 5)]
    back = Sequence.from_json(A.to_json())
    assert back.total_dims() == A.total_dims()
    assert isinstance(back.components[1], sv.SimplicialVS)
