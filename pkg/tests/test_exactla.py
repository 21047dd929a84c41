from fractions import Fraction

import pytest
from hypothesis import given, strategies as st
from sympy import GF as SGF, QQ as SQQ
from sympy.polys.matrices import DomainMatrix

from opforge.exactla import (GF, GF2, QQ, Field, Matrix, Subspace, TruncationError, nullspace,
                             quotient_basis, solve)

FIELDS = [QQ, GF(2), GF(5), GF(7), GF2(3), GF2(5)]


def elements(F):
    if F.kind == "rationals":
        return st.builds(lambda a, b: QQ(Fraction(a, b)), st.integers(-20, 20), st.integers(1, 9))
    if F.kind == "prime":
        return st.integers(0, F.p - 1)
    return st.tuples(st.integers(0, F.p - 1), st.integers(0, F.p - 1))


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: F.tag)
@given(data=st.data())
def test_field_axioms(F, data):
    a, b, c = (data.draw(elements(F)) for _ in range(3))
    assert F.add(a, F.add(b, c)) == F.add(F.add(a, b), c)
    assert F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == F.zero
    assert F.mul(a, b) == F.mul(b, a)
    if not F.is_zero(a):
        assert F.mul(a, F.inv(a)) == F.one
    assert F.parse(F.format(a)) == a


@pytest.mark.parametrize("F", [GF(3), GF2(3)], ids=lambda F: F.tag)
def test_finite_fields_have_no_zero_divisors(F):
    els = F.elements()
    assert len(els) == F.p ** (1 if F.kind == "prime" else 2)
    for a in els:
        for b in els:
            if not F.is_zero(a) and not F.is_zero(b):
                assert not F.is_zero(F.mul(a, b))


def test_field_tags_roundtrip_and_reject_garbage():
    for F in FIELDS:
        assert Field.from_tag(F.tag) == F
    for bad in ("p:4", "x", "p2:2"):
        with pytest.raises(ValueError):
            Field.from_tag(bad)


def random_matrix(F, rows, cols, data):
    return Matrix.from_rows(F, [[data.draw(elements(F)) for _ in range(cols)] for _ in range(rows)], cols)


def sympy_rank(M):
    F = M.field
    dom = SQQ if F.kind == "rationals" else SGF(F.p)
    conv = (lambda x: SQQ(int(x.numerator), int(x.denominator))) if F.kind == "rationals" else dom
    rows = [[conv(x) for x in r] for r in M.to_lists()]
    return DomainMatrix(rows, M.shape, dom).rank() if M.rows and M.cols else 0


@pytest.mark.parametrize("F", [QQ, GF(2), GF(5)], ids=lambda F: F.tag)
@given(data=st.data(), rows=st.integers(0, 5), cols=st.integers(0, 5))
def test_rank_matches_independent_implementation(F, data, rows, cols):
    M = random_matrix(F, rows, cols, data)
    assert M.rank() == sympy_rank(M)


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: F.tag)
@given(data=st.data(), rows=st.integers(1, 5), cols=st.integers(1, 5))
def test_rank_nullity_and_kernel(F, data, rows, cols):
    M = random_matrix(F, rows, cols, data)
    K = nullspace(M)
    assert M.rank() + K.cols == cols
    assert (M @ K).is_zero()
    assert K.rank() == K.cols


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: F.tag)
@given(data=st.data(), n=st.integers(1, 4), k=st.integers(1, 3))
def test_solve_finds_solutions_exactly_when_consistent(F, data, n, k):
    M = random_matrix(F, n, n, data)
    X = random_matrix(F, n, k, data)
    x, null = solve(M, M @ X)
    assert x is not None and M @ x == M @ X
    if M.rank() == n:
        assert M.inverse() @ M == Matrix.identity(F, n)
        assert x == X and null.cols == 0


def test_inconsistent_system_and_singular_inverse():
    M = Matrix.from_rows(QQ, [[1, 1], [1, 1]])
    x, null = solve(M, Matrix.from_rows(QQ, [[1], [2]]))
    assert x is None and null.cols == 1
    with pytest.raises(ValueError):
        M.inverse()


@given(data=st.data(), n=st.integers(1, 5), k=st.integers(0, 4))
def test_quotient_projection_kills_subspace(data, n, k):
    S = random_matrix(GF(3), n, k, data)
    Q = quotient_basis(S, n)
    assert Q.rows == n - S.rank()
    assert (Q @ S).is_zero()
    assert Q.rank() == Q.rows


def test_subspace_coordinates():
    S = Subspace.span(Matrix.from_rows(QQ, [[1, 0], [1, 1], [0, 1]]))
    assert S.dim == 2
    assert S.coordinates({0: QQ(1), 1: QQ(2), 2: QQ(1)}) is not None
    assert S.coordinates({0: QQ(1)}) is None


def test_kron_shape_and_mixed_product():
    A = Matrix.from_rows(QQ, [[1, 2], [3, 4]])
    B = Matrix.from_rows(QQ, [[0, 1], [1, 0]])
    assert A.kron(B).shape == (4, 4)
    assert (A @ A).kron(B @ B) == A.kron(B) @ A.kron(B)


def test_truncation_error_is_a_value_error():
    assert issubclass(TruncationError, ValueError)
