import random

import pytest
from hypothesis import given, strategies as st
from sympy import QQ as SQQ
from sympy.polys.matrices import DomainMatrix

from opforge import chaincat as ch
from opforge.exactla import GF, QQ, Matrix, TruncationError, nullspace
from opforge.harness import random_complex

seeds = st.integers(0, 10 ** 6)


def rank_oracle(M):
    if not (M.rows and M.cols):
        return 0
    rows = [[SQQ(int(x.numerator), int(x.denominator)) for x in r] for r in M.to_lists()]
    return DomainMatrix(rows, M.shape, SQQ).rank()


def homology_oracle(C):
    out = {}
    for d in C.degrees():
        r_out = rank_oracle(C.d(d)) if d > C.lo else 0
        r_in = rank_oracle(C.d(d + 1)) if d < C.hi else 0
        h = C.dim(d) - r_out - r_in
        if h:
            out[d] = h
    return out


@given(seed=seeds, top=st.integers(1, 4))
def test_homology_matches_rank_formula(seed, top):
    C = random_complex(random.Random(seed), QQ, top)
    assert not C.d_squared_violations()
    assert ch.homology(C) == homology_oracle(C)
    assert sum((-1) ** d * h for d, h in ch.homology(C).items()) == C.euler_characteristic()


@given(seed=seeds)
def test_tensor_is_a_complex_and_satisfies_kunneth(seed):
    rng = random.Random(seed)
    A, B = random_complex(rng, QQ, 2), random_complex(rng, QQ, 2)
    T = ch.tensor(A, B)
    assert not T.d_squared_violations()
    expected = {}
    for i, a in ch.homology(A).items():
        for j, b in ch.homology(B).items():
            expected[i + j] = expected.get(i + j, 0) + a * b
    assert ch.homology(T) == expected


@given(seed=seeds)
def test_symmetry_is_an_involutive_chain_map(seed):
    rng = random.Random(seed)
    A, B = random_complex(rng, GF(5), 2), random_complex(rng, GF(5), 2)
    s, t = ch.symmetry(A, B), ch.symmetry(B, A)
    assert not s.commutation_violations()
    comp = t @ s
    assert all(comp[d] == Matrix.identity(A.field, comp.source.dim(d)) for d in comp.source.degrees())


def test_unitors_are_isomorphisms():
    X = ch.disk(2, QQ)
    for u in (ch.left_unitor(X), ch.right_unitor(X)):
        assert all(m.rows == m.cols and m.rank() == m.rows for m in u.comps.values())


def test_spheres_and_disks():
    assert ch.homology(ch.sphere(3)) == {3: 1}
    assert ch.homology(ch.disk(3)) == {}
    f = ch.sphere_into_disk(2)
    assert ch.is_cofibration(f) and not ch.is_weak_equivalence(f)
    assert ch.is_weak_equivalence(ch.zero_into(ch.disk(1)))


def test_generating_cofibrations_in_small_windows():
    cof, triv = ch.generating_cofibrations((0, 0))
    assert len(cof) == 1 and not triv
    assert cof[0].target.graded_dims() == {0: 1}
    cof, triv = ch.generating_cofibrations((0, 1))
    assert (len(cof), len(triv)) == (2, 1)
    assert all(ch.is_weak_equivalence(t) for t in triv)


@given(seed=seeds)
def test_pushout_along_injection(seed):
    rng = random.Random(seed)
    d = rng.randint(1, 3)
    f = ch.sphere_into_disk(d, QQ)
    Z = random_complex(rng, QQ, 3)
    # attach along the first cycle of degree d-1 in Z, or along zero
    K = nullspace(Z.d(d - 1)) if d - 1 > Z.lo else Matrix.identity(QQ, Z.dim(d - 1))
    col = K.column(0) if K.cols else {}
    g = ch.ChainMap(f.source, Z, {d - 1: Matrix.from_columns(QQ, Z.dim(d - 1), [col])})
    po = ch.pushout(f, g)
    P = po.object
    for k in P.degrees():
        assert P.dim(k) == f.target.dim(k) + Z.dim(k) - f.source.dim(k)
    assert ch.is_cofibration(po.into_right)
    m = po.mediator(po.into_left, po.into_right)
    assert all(m[k] == Matrix.identity(QQ, P.dim(k)) for k in P.degrees())


def test_mediator_rejects_non_commuting_cocone():
    f = ch.sphere_into_disk(1, QQ)
    g = ch.ChainMap(f.source, f.source, {0: Matrix.identity(QQ, 1)})
    po = ch.pushout(f, g)
    zero = ch.ChainMap(f.target, po.object, {})
    with pytest.raises(ValueError):
        po.mediator(zero, po.into_right)


@pytest.mark.parametrize("a,b", [(1, 1), (1, 2), (2, 1)])
def test_pushout_product_of_generators(a, b):
    i, j = ch.sphere_into_disk(a, QQ), ch.sphere_into_disk(b, QQ)
    pp = ch.pushout_product(i, j)
    assert ch.is_cofibration(pp)
    # boundary of D^a (x) D^b into it: one new cell in degree a+b, source a homology sphere
    diff = {d: pp.target.dim(d) - pp.source.dim(d) for d in pp.target.degrees()}
    assert {d: k for d, k in diff.items() if k} == {a + b: 1}
    assert ch.homology(pp.source) == {a + b - 1: 1}
    t = ch.zero_into(ch.disk(b, QQ))
    assert ch.is_weak_equivalence(ch.pushout_product(i, t))


def test_iterated_pushout_product_agrees_with_binary():
    i, j = ch.sphere_into_disk(1, QQ), ch.sphere_into_disk(2, QQ)
    it = ch.iterated_pushout_product([i, j])
    pp = ch.pushout_product(i, j)
    assert it.source.graded_dims() == pp.source.graded_dims()
    assert ch.is_cofibration(ch.iterated_pushout_product([i, j, ch.sphere_into_disk(1, QQ)]))


def test_json_roundtrip_and_d_squared_detection():
    C = random_complex(random.Random(7), GF(3), 3)
    assert ch.ChainComplex.from_json(C.to_json()).graded_dims() == C.graded_dims()
    bad = {"field": "q", "window": [0, 2], "dims": {"0": 1, "1": 1, "2": 1}, "diff": {"1": ["1"], "2": ["1"]}}
    with pytest.raises(ValueError, match="degree"):
        ch.ChainComplex.from_json(bad)
    assert ch.ChainComplex.from_json(bad, check=False).d_squared_violations() == [2]


def test_window_truncation_is_loud():
    with pytest.raises(TruncationError):
        ch.ChainComplex(QQ, (0, 1), {3: 1})
