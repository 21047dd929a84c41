import random
from math import comb

import pytest
from hypothesis import given, strategies as st

from opforge import chaincat as ch
from opforge import simpcat as sv
from opforge.exactla import GF, QQ, Matrix
from opforge.harness import random_complex

seeds = st.integers(0, 10 ** 6)


def is_iso(m):
    return all(M.rows == M.cols and M.rank() == M.rows for M in m.comps.values())


@given(seed=seeds, top=st.integers(1, 4))
def test_gamma_dims_identities_and_roundtrip(seed, top):
    C = random_complex(random.Random(seed), QQ, top)
    G = sv.gamma(C, top)
    assert not G.identity_violations()
    for n in range(top + 1):
        assert G.dim(n) == sum(comb(n, k) * C.dim(k) for k in range(n + 1))
    u = sv.dk_unit(C, top)
    assert not u.commutation_violations() and is_iso(u)
    assert sv.normalize(G).graded_dims() == C.graded_dims()


@given(seed=seeds)
def test_counit_is_iso_on_tensor_products(seed):
    rng = random.Random(seed)
    top = 3
    A, B = sv.gamma(random_complex(rng, GF(3), top), top), sv.gamma(random_complex(rng, GF(3), top), top)
    T = sv.sv_tensor(A, B)
    assert not T.identity_violations()
    e = sv.dk_counit(T)
    assert not e.violations() and is_iso(e)


@given(seed=seeds)
def test_alexander_whitney_after_shuffle_is_identity(seed):
    rng = random.Random(seed)
    top = 3
    A, B = sv.gamma(random_complex(rng, QQ, top), top), sv.gamma(random_complex(rng, QQ, top), top)
    ez, aw = sv.shuffle_map(A, B), sv.aw_map(A, B)
    assert not ez.commutation_violations() and not aw.commutation_violations()
    for n in range(top + 1):
        assert aw[n] @ ez[n] == Matrix.identity(QQ, ez.source.dim(n))
    # below the truncation the shuffle map is a quasi-isomorphism
    assert ch.is_weak_equivalence(ez, degrees=range(top))


@pytest.mark.parametrize("p,q", [(0, 2), (1, 1), (2, 1), (2, 2), (3, 1)])
def test_shuffles_count_and_partition(p, q):
    sh = sv.shuffles(p, q)
    assert len(sh) == comb(p + q, p)
    for mu, nu, sign in sh:
        assert sorted(mu + nu) == list(range(p + q))
        inversions = sum(1 for a in mu for b in nu if a > b)
        assert sign == (-1) ** inversions


def test_surjections_count():
    # order-preserving surjections [n] -> [k] correspond to k-subsets of the n gaps
    for n in range(5):
        for k in range(n + 1):
            assert len(list(sv.surjections(n, k))) == comb(n, k)


def test_constant_object_normalizes_to_degree_zero():
    X = sv.constant(QQ, 3, dim=2)
    assert not X.identity_violations()
    assert sv.normalize(X).graded_dims() == {0: 2}


def test_broken_face_is_detected():
    X = sv.gamma(ch.disk(1, QQ, (0, 3)), 3)
    js = X.to_json()
    key = next(k for k in js["faces"] if k.startswith("2,"))
    js["faces"][key] = ["0"] * len(js["faces"][key])
    with pytest.raises(ValueError, match="simplicial identities"):
        sv.SimplicialVS.from_json(js)
    assert sv.SimplicialVS.from_json(js, check=False).identity_violations()


def test_json_roundtrip():
    X = sv.gamma(random_complex(random.Random(3), GF(5), 3), 3)
    Y = sv.SimplicialVS.from_json(X.to_json())
    assert Y.levels == X.levels and Y.faces == X.faces and Y.degens == X.degens


def test_model_predicates_through_normalization():
    C = ch.disk(2, QQ, (0, 3))
    f = sv.gamma_map(ch.zero_into(C), 3)
    cof, we, fib = sv.sv_model_predicates(f)
    assert cof and we
    g = sv.gamma_map(ch.sphere_into_disk(2, QQ, (0, 3)), 3)
    assert not sv.sv_model_predicates(g)[1]
