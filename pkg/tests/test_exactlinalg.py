import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from wallkit.errors import DimensionMismatch
from wallkit.exactlinalg import IntMatrix, matmul, rank_exact, smith_normal_form


def m(rows):
    return IntMatrix.from_rows(rows)


def test_rank_examples():
    assert rank_exact(IntMatrix.identity(3)) == 3
    assert rank_exact(IntMatrix.zeros(2, 3)) == 0
    assert rank_exact(m([[2, 4], [1, 2]])) == 1
    assert rank_exact(IntMatrix.zeros(0, 0)) == 0


def test_snf_examples():
    assert smith_normal_form(m([[2, 0], [0, 6]])) == [2, 6]
    assert smith_normal_form(m([[2]])) == [2]
    assert smith_normal_form(m([[6, 0], [0, 4]])) == [2, 12]
    assert smith_normal_form(IntMatrix.zeros(2, 2)) == []


def test_matmul_examples():
    a = m([[1, 2], [3, 4]])
    assert matmul(IntMatrix.identity(2), a) == a
    assert matmul(a, IntMatrix.zeros(2, 3)).is_zero()
    with pytest.raises(DimensionMismatch):
        matmul(a, IntMatrix.zeros(3, 1))


def test_shape_errors():
    with pytest.raises(DimensionMismatch):
        IntMatrix(1, 2, ((1,),))


def test_big_entries_stay_exact():
    big = 10 ** 40
    a = m([[big, big + 1], [big - 1, big]])
    assert rank_exact(a) == 2
    assert smith_normal_form(a) == [1, 1]


matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_rank_and_snf_match_sympy(rows):
    a = m(rows)
    sm = sympy.Matrix(rows)
    assert rank_exact(a) == sm.rank()
    d = smith_normal_form(a)
    want = [abs(int(sympy_snf(sm, domain=sympy.ZZ)[i, i])) for i in range(min(sm.shape))]
    assert d == [x for x in want if x]
    assert len(d) == rank_exact(a)
    assert all(d[i + 1] % d[i] == 0 for i in range(len(d) - 1))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=3, max_size=3),
       st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=3, max_size=3),
       st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=3, max_size=3))
def test_matmul_associative_and_rank_bound(x, y, z):
    a, b, c = m(x), m(y), m(z)
    assert matmul(matmul(a, b), c) == matmul(a, matmul(b, c))
    assert rank_exact(matmul(a, b)) <= min(rank_exact(a), rank_exact(b))
