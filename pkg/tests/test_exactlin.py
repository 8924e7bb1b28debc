import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reltilt import exactlin as el
from reltilt.exactlin import Field

F3 = Field(3)
F101 = Field(101)


def matrices(p, max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(0, p - 1), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    ).map(lambda rows: np.array(rows, dtype=np.int64))


def brute_kernel_size(A, p):
    """Oracle: count x in F_p^n with A x = 0 by enumeration."""
    n = A.shape[1]
    return sum(1 for x in itertools.product(range(p), repeat=n) if not ((A @ np.array(x)) % p).any())


def brute_det(A, p):
    n = A.shape[0]
    total = 0
    for perm in itertools.permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        prod = 1
        for i in range(n):
            prod = prod * int(A[i, perm[i]]) % p
        total += sign * prod
    return total % p


def test_field_rejects_composite():
    with pytest.raises(ValueError):
        Field(100)


def test_inverse_elements():
    assert all(a * F101.inv(a) % 101 == 1 for a in range(1, 101))
    with pytest.raises(ZeroDivisionError):
        F101.inv(0)


@settings(max_examples=60, deadline=None)
@given(matrices(3))
def test_kernel_matches_enumeration(A):
    K = el.kernel(F3, A)
    assert 3 ** K.shape[1] == brute_kernel_size(A, 3)
    assert not F3.mul(A, K).any()
    assert el.rank(F3, A) + K.shape[1] == A.shape[1]


@settings(max_examples=60, deadline=None)
@given(matrices(101, 5, 5))
def test_rref_is_reduced(A):
    R, piv = el.rref(F101, A)
    for i, c in enumerate(piv):
        assert R[i, c] == 1
        assert np.count_nonzero(R[:, c]) == 1
        assert not R[i, :c].any()
    assert not R[len(piv):].any()
    assert list(piv) == sorted(piv)


@settings(max_examples=60, deadline=None)
@given(matrices(101, 5, 5), st.data())
def test_solve_linear(A, data):
    x = np.array(data.draw(st.lists(st.integers(0, 100), min_size=A.shape[1], max_size=A.shape[1])))
    b = F101.mul(A, x.reshape(-1, 1))[:, 0]
    y = el.solve_linear(F101, A, b)
    assert y is not None
    assert (F101.mul(A, y.reshape(-1, 1))[:, 0] == b).all()


def test_solve_linear_inconsistent():
    A = F101.mat([[1, 0], [0, 0]])
    assert el.solve_linear(F101, A, np.array([0, 1])) is None


@settings(max_examples=40, deadline=None)
@given(matrices(3, 3, 3))
def test_char_poly_matches_determinant(A):
    if A.shape[0] != A.shape[1]:
        A = A[: min(A.shape), : min(A.shape)]
    n = A.shape[0]
    c = el.char_poly(F3, A) if n < 3 else None
    if c is None:
        return
    for t in range(3):
        val = sum(ci * t**i for i, ci in enumerate(c)) % 3
        assert val == brute_det((t * np.eye(n, dtype=np.int64) - A) % 3, 3)


@settings(max_examples=40, deadline=None)
@given(matrices(101, 4, 4))
def test_inverse_round_trip(A):
    n = min(A.shape)
    A = A[:n, :n]
    if el.is_invertible(F101, A):
        assert (F101.mul(el.inverse(F101, A), A) == np.eye(n, dtype=np.int64)).all()
    else:
        with pytest.raises(ValueError):
            el.inverse(F101, A)


def test_complement_basis_spans():
    sub = F101.mat([[1], [1], [0]])
    C = el.complement_basis(F101, sub, 3)
    assert C.shape[1] == 2
    assert el.rank(F101, np.hstack([sub, C])) == 3


def test_column_space_rank():
    A = F101.mat([[1, 2, 3], [2, 4, 6]])
    assert el.column_space(F101, A).shape[1] == 1
