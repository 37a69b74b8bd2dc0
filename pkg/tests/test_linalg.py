import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from glcharp import linalg


@st.composite
def matrices(draw):
    p = draw(st.sampled_from([2, 3, 5, 7]))
    r = draw(st.integers(0, 6))
    c = draw(st.integers(0, 6))
    vals = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return np.array(vals, dtype=np.int64).reshape(r, c), p


@settings(max_examples=200)
@given(matrices())
def test_rank_nullity(data):
    A, p = data
    N = linalg.nullspace(A, p)
    assert linalg.rank(A, p) + N.shape[1] == A.shape[1]
    if N.size and A.size:
        assert not linalg.matmul(A, N, p).any()
    L = linalg.left_nullspace(A, p)
    if L.size and A.size:
        assert not linalg.matmul(L, A, p).any()


@settings(max_examples=200)
@given(matrices(), st.integers(0, 10**6))
def test_solve_recovers_consistent_systems(data, seed):
    A, p = data
    if A.shape[1] == 0:
        return
    x = np.random.default_rng(seed).integers(0, p, A.shape[1])
    b = linalg.matmul(A, x.reshape(-1, 1), p).ravel()
    y = linalg.solve(A, b, p)
    assert y is not None
    assert np.array_equal(linalg.matmul(A, y.reshape(-1, 1), p).ravel(), b)


def test_inconsistent_system():
    A = np.array([[1, 0], [1, 0]])
    assert linalg.solve(A, np.array([0, 1]), 2) is None
    assert not linalg.in_span(np.array([[1], [0]]), np.array([0, 1]), 3)


def test_rank_examples():
    assert linalg.rank(np.array([[1, 1], [1, 1]]), 2) == 1
    assert linalg.rank(np.array([[2, 0], [0, 3]]), 3) == 1
    assert linalg.rank(np.zeros((0, 4), dtype=np.int64), 5) == 0
