import numpy as np
from hypothesis import given, settings, strategies as st

from toricex import _linalg as la

small = st.integers(-5, 5)


def matrices(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4).flatmap(lambda k: matrices(k, k)))
def test_det_matches_numpy(a):
    assert la.det(a) == round(np.linalg.det(np.array(a, dtype=float)))


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 5).flatmap(lambda r: st.integers(1, 5).flatmap(lambda c: matrices(r, c))))
def test_rank_matches_numpy(a):
    assert la.rank(a) == np.linalg.matrix_rank(np.array(a, dtype=float))


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 5).flatmap(lambda r: st.integers(1, 4).flatmap(lambda c: matrices(r, c))))
def test_smith_normal_form(a):
    u, d, v = la.smith_normal_form(a)
    assert la.matmul(la.matmul(u, a), v) == d
    assert abs(la.det(u)) == 1 and abs(la.det(v)) == 1
    diag = [d[i][i] for i in range(min(len(d), len(d[0])))]
    assert all(d[i][j] == 0 for i in range(len(d)) for j in range(len(d[0])) if i != j)
    assert all(x >= 0 for x in diag)
    nz = [x for x in diag if x]
    assert diag[: len(nz)] == nz
    assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4).flatmap(lambda k: matrices(k, k)))
def test_inverse_unimodular(a):
    if abs(la.det(a)) != 1:
        return
    b = la.inverse_unimodular(a)
    assert la.matmul(a, b) == la.identity(len(a))
