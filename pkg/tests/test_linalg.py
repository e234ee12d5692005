import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from masseyfp import linalg
from masseyfp.errors import DimensionMismatch, SingularMatrixError

primes = st.sampled_from([2, 3, 5])


@st.composite
def matrices(draw, max_rows=6, max_cols=6):
    p = draw(primes)
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(1, max_cols))
    vals = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return p, np.array(vals, dtype=np.int64).reshape(r, c)


def brute_row_space(A, p):
    """Every F_p-combination of the rows, as a set of tuples."""
    span = set()
    for coeffs in itertools.product(range(p), repeat=len(A)):
        v = np.zeros(A.shape[1], dtype=np.int64)
        for c, row in zip(coeffs, A):
            v = (v + c * row) % p
        span.add(tuple(v))
    return span


def brute_kernel_size(A, p):
    n = A.shape[1]
    return sum(1 for x in itertools.product(range(p), repeat=n)
               if not (A @ np.array(x, dtype=np.int64) % p).any())


@given(matrices(max_rows=4, max_cols=4))
def test_rank_matches_span_size(pm):
    p, A = pm
    assert p ** linalg.rank(A, p) == len(brute_row_space(A, p))


@given(matrices(max_rows=4, max_cols=4))
def test_kernel_matches_brute_force(pm):
    p, A = pm
    K = linalg.kernel(A, p)
    assert not (A @ K.T % p).any()
    assert p ** len(K) == brute_kernel_size(A, p)
    assert linalg.rank(K, p) == len(K)


@given(matrices())
def test_rref_is_reduced(pm):
    p, A = pm
    R, r, piv = linalg.rref(A, p)
    assert r == len(piv)
    for k, c in enumerate(piv):
        assert R[k, c] == 1
        assert not np.delete(R[:, c], k).any()
    assert not R[r:].any()
    assert brute_row_space(R[:r], p) == brute_row_space(A, p) if len(A) <= 4 else True


@given(st.integers(1, 70), st.integers(1, 70), st.integers(0, 2**32 - 1))
def test_gf2_packed_path_agrees_with_generic(rows, cols, seed):
    # multi-word rows exercise the packed representation
    A = np.random.default_rng(seed).integers(0, 2, (rows, cols))
    R2, r2, p2 = linalg.rref(A, 2)
    R, r, pv = linalg._rref_odd(A.copy(), 2)
    assert r2 == r and list(p2) == list(pv)
    assert np.array_equal(R2, R)


@given(matrices(max_rows=4, max_cols=4), st.data())
def test_solve_affine_enumerates_all_solutions(pm, data):
    p, A = pm
    b = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=len(A), max_size=len(A))), dtype=np.int64)
    sol = linalg.solve_affine(A, b, p)
    brute = {x for x in itertools.product(range(p), repeat=A.shape[1])
             if np.array_equal(A @ np.array(x, dtype=np.int64) % p, b % p)}
    found = {tuple(v) for v in linalg.iter_solutions(sol)} if sol.consistent else set()
    assert found == brute
    assert (sol.size if sol.consistent else 0) == len(brute)


def test_iter_solutions_respects_budget():
    sol = linalg.solve_affine(np.zeros((1, 8), dtype=np.int64), [0], 3)
    with pytest.raises(Exception):
        list(linalg.iter_solutions(sol, budget=10))


@given(primes, st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_inverse_and_inv_transpose(p, n, seed):
    X = np.random.default_rng(seed).integers(0, p, (n, n))
    if linalg.rank(X, p) < n:
        with pytest.raises(SingularMatrixError):
            linalg.inverse(X, p)
        return
    Y = linalg.inverse(X, p)
    assert np.array_equal(X @ Y % p, np.eye(n, dtype=np.int64))
    assert np.array_equal(linalg.inv_transpose(X, p), Y.T)


def test_proportionality_witness():
    assert linalg.proportionality_witness([1, 2, 0], [2, 4, 0], 5) == 2
    assert linalg.proportionality_witness([1, 2, 0], [2, 4, 1], 5) is None
    assert linalg.proportionality_witness([0, 0], [0, 0], 3) == 0
    with pytest.raises(DimensionMismatch):
        linalg.proportionality_witness([1], [1, 0], 3)


def test_in_coset():
    assert linalg.in_coset([1, 1, 0], [1, 0, 0], [[0, 1, 0]], 2)
    assert not linalg.in_coset([1, 1, 1], [1, 0, 0], [[0, 1, 0]], 2)


def test_complement_basis_is_independent_mod_subspace():
    vecs = np.array([[1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1]])
    sub = np.array([[1, 1, 0]])
    C = linalg.complement_basis(vecs, sub, 2)
    assert len(C) == 2
    assert linalg.rank(np.vstack([sub, C]), 2) == 3


def test_non_prime_rejected():
    with pytest.raises(ValueError):
        linalg.rank(np.eye(2, dtype=np.int64), 4)
