"""Exact linear algebra over the prime field F_p.

Vectors and matrices are plain numpy integer arrays with entries in
``range(p)``; the modulus travels as an explicit argument.  Over F_2 row
reduction runs on rows packed into uint64 words.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np

from .errors import BudgetExceeded, DimensionMismatch, SingularMatrixError

DEFAULT_ENUMERATION_BUDGET = 2**20


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise ValueError(f"modulus must be prime, got {p!r}")
    return int(p)


def as_mat(M, p: int) -> np.ndarray:
    A = np.asarray(M, dtype=np.int64)
    if A.ndim == 1 and A.size == 0:
        A = A.reshape(0, 0)
    if A.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {A.shape}")
    return A % p


def as_vec(v, p: int) -> np.ndarray:
    a = np.asarray(v, dtype=np.int64)
    if a.ndim != 1:
        raise DimensionMismatch(f"expected a vector, got shape {a.shape}")
    return a % p


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(A, B, p: int) -> np.ndarray:
    return (np.asarray(A, dtype=np.int64) @ np.asarray(B, dtype=np.int64)) % p


# -- row reduction -----------------------------------------------------------


def _pack_gf2(A: np.ndarray) -> np.ndarray:
    rows, cols = A.shape
    nwords = max(1, (cols + 63) // 64)
    W = np.zeros((rows, nwords), dtype=np.uint64)
    for w in range(nwords):
        chunk = A[:, 64 * w: 64 * (w + 1)].astype(np.uint64)
        if chunk.shape[1] == 0:
            continue
        shifts = np.arange(chunk.shape[1], dtype=np.uint64)
        W[:, w] = np.bitwise_or.reduce(chunk << shifts, axis=1)
    return W


def _unpack_gf2(W: np.ndarray, cols: int) -> np.ndarray:
    rows = W.shape[0]
    A = np.zeros((rows, cols), dtype=np.int64)
    for c in range(cols):
        A[:, c] = ((W[:, c // 64] >> np.uint64(c % 64)) & np.uint64(1)).astype(np.int64)
    return A


def _rref_gf2(A: np.ndarray):
    rows, cols = A.shape
    W = _pack_gf2(A)
    r = 0
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        w, b = c // 64, np.uint64(c % 64)
        bits = (W[:, w] >> b) & np.uint64(1)
        below = np.flatnonzero(bits[r:])
        if below.size == 0:
            continue
        k = r + int(below[0])
        if k != r:
            W[[r, k]] = W[[k, r]]
            bits[[r, k]] = bits[[k, r]]
        hit = np.flatnonzero(bits)
        hit = hit[hit != r]
        if hit.size:
            W[hit] ^= W[r]
        pivots.append(c)
        r += 1
    return _unpack_gf2(W, cols), r, pivots


def _rref_odd(A: np.ndarray, p: int):
    A = A.copy()
    rows, cols = A.shape
    r = 0
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        below = np.flatnonzero(A[r:, c])
        if below.size == 0:
            continue
        k = r + int(below[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[hit] = (A[hit] - np.outer(col[hit], A[r])) % p
        pivots.append(c)
        r += 1
    return A, r, pivots


def rref(M, p: int):
    """Reduced row-echelon form of ``M`` over F_p.

    Returns ``(reduced, rank, pivot_cols)``.  Pivots are taken as the first
    nonzero entry scanning each column top-down, so output is reproducible.
    """
    check_prime(p)
    A = as_mat(M, p)
    if A.size == 0:
        return A.copy(), 0, []
    if p == 2:
        return _rref_gf2(A)
    return _rref_odd(A, p)


def rank(M, p: int) -> int:
    A = as_mat(M, p)
    if A.size == 0:
        return 0
    return rref(np.unique(A, axis=0), p)[1]


def row_basis(M, p: int) -> np.ndarray:
    """Rows of the reduced form spanning the row space of ``M``."""
    A = as_mat(M, p)
    if A.size == 0:
        return np.zeros((0, A.shape[1]), dtype=np.int64)
    R, r, _ = rref(np.unique(A, axis=0), p)
    return R[:r]


def kernel(M, p: int) -> np.ndarray:
    """Basis of {x : M x = 0}, one vector per row."""
    A = as_mat(M, p)
    cols = A.shape[1]
    if A.shape[0] == 0:
        return identity(cols)
    R, r, pivots = rref(np.unique(A, axis=0), p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-R[i, f]) % p
    return basis


def left_kernel(M, p: int) -> np.ndarray:
    """Basis of {y : y M = 0}; rows annihilate the column space of ``M``."""
    return kernel(as_mat(M, p).T, p)


# -- affine solution sets -----------------------------------------------------


@dataclass(frozen=True)
class AffineSolutionSet:
    """All solutions of ``A x = b``: ``particular + span(kernel_basis)``.

    ``particular is None`` means the system is inconsistent.
    """

    p: int
    dim: int
    particular: Optional[np.ndarray]
    kernel_basis: np.ndarray = field(repr=False)

    @property
    def consistent(self) -> bool:
        return self.particular is not None

    @property
    def size(self) -> int:
        if self.particular is None:
            return 0
        return self.p ** len(self.kernel_basis)

    def __iter__(self) -> Iterator[np.ndarray]:
        return iter_solutions(self)


def iter_solutions(sol: AffineSolutionSet, budget: int = DEFAULT_ENUMERATION_BUDGET) -> Iterator[np.ndarray]:
    """Lazily enumerate every element of ``sol`` in a fixed order."""
    if sol.particular is None:
        return
    k = len(sol.kernel_basis)
    if sol.p ** k > budget:
        raise BudgetExceeded("solution set too large to enumerate",
                             solutions=sol.p ** k, budget=budget)
    for coeffs in itertools.product(range(sol.p), repeat=k):
        v = sol.particular.copy()
        if k:
            v = (v + np.asarray(coeffs, dtype=np.int64) @ sol.kernel_basis) % sol.p
        yield v


def solve_affine(A, b, p: int) -> AffineSolutionSet:
    A = as_mat(A, p)
    b = as_vec(b, p)
    if A.shape[0] != b.shape[0]:
        raise DimensionMismatch(f"{A.shape[0]} equations but right side has {b.shape[0]} entries")
    cols = A.shape[1]
    aug = np.concatenate([A, b[:, None]], axis=1)
    aug = np.unique(aug, axis=0) if aug.shape[0] else aug
    R, r, pivots = rref(aug, p)
    if cols in pivots:
        return AffineSolutionSet(p, cols, None, np.zeros((0, cols), dtype=np.int64))
    particular = np.zeros(cols, dtype=np.int64)
    for i, pc in enumerate(pivots):
        particular[pc] = R[i, cols]
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-R[i, f]) % p
    return AffineSolutionSet(p, cols, particular, basis)


def in_span(v, basis, p: int) -> bool:
    v = as_vec(v, p)
    B = np.asarray(basis, dtype=np.int64).reshape(-1, v.shape[0]) % p
    if not v.any():
        return True
    if B.shape[0] == 0:
        return False
    return rank(B, p) == rank(np.vstack([B, v]), p)


def in_coset(v, particular, basis, p: int) -> bool:
    """True iff ``v - particular`` lies in the span of ``basis``."""
    v = as_vec(v, p)
    particular = as_vec(particular, p)
    if v.shape != particular.shape:
        raise DimensionMismatch("vector and coset representative differ in length")
    B = np.asarray(basis, dtype=np.int64)
    if B.size and B.reshape(len(B), -1).shape[1] != v.shape[0]:
        raise DimensionMismatch("basis vectors have the wrong length")
    return in_span((v - particular) % p, B, p)


def proportionality_witness(phi1, phi2, p: int) -> Optional[int]:
    """Return ``lam`` with ``phi2 == lam * phi1`` if ker(phi1) is inside ker(phi2).

    Functionals are given by coordinate vectors.  Containment of kernels is
    decided by rank: it holds iff ``phi2`` lies in the span of ``phi1``.
    """
    phi1 = as_vec(phi1, p)
    phi2 = as_vec(phi2, p)
    if phi1.shape != phi2.shape:
        raise DimensionMismatch("functionals must have equal dimension")
    if rank(np.vstack([phi1, phi2]), p) > rank(phi1[None, :], p):
        return None
    if not phi1.any():
        return 0
    k = int(np.flatnonzero(phi1)[0])
    return int(phi2[k] * pow(int(phi1[k]), -1, p) % p)


def inverse(X, p: int) -> np.ndarray:
    X = as_mat(X, p)
    n, m = X.shape
    if n != m:
        raise DimensionMismatch("only square matrices are invertible")
    R, r, _ = rref(np.concatenate([X, identity(n)], axis=1), p)
    if r < n or not np.array_equal(R[:, :n], identity(n)):
        raise SingularMatrixError("matrix is singular")
    return R[:, n:]


def inv_transpose(X, p: int) -> np.ndarray:
    """(X^-1)^T: the matrix of the contragredient action in the dual basis."""
    return inverse(X, p).T.copy()


def complement_basis(vectors, subspace, p: int) -> np.ndarray:
    """Pick rows of ``vectors`` extending a basis of ``subspace`` greedily.

    The chosen rows are independent modulo ``subspace``.
    """
    vectors = np.asarray(vectors, dtype=np.int64) % p
    current = np.asarray(subspace, dtype=np.int64).reshape(-1, vectors.shape[1]) % p
    r = rank(current, p) if len(current) else 0
    chosen = []
    for v in vectors:
        trial = np.vstack([current, v]) if len(current) else v[None, :]
        rt = rank(trial, p)
        if rt > r:
            chosen.append(v)
            current, r = trial, rt
    return np.array(chosen, dtype=np.int64).reshape(-1, vectors.shape[1])
