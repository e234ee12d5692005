"""Unitriangular groups U_m(F_p), their corner quotients, and the kernel A of U_4 -> F_p^3.

Indices 1-based as in matrix notation.  Strict upper entries are ordered
row-major ((1,2), (1,3), ..., (m-1,m)); a group element's index is its entry
tuple read as a base-p numeral.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import linalg
from .cohomology import Cochain, GModule
from .errors import BudgetExceeded
from .groups import DEFAULT_ORDER_CAP, FiniteGroup, GroupHom, elementary_abelian


def strict_positions(size: int, corner: bool = True) -> list:
    pos = [(i, j) for i in range(1, size + 1) for j in range(i + 1, size + 1)]
    if not corner:
        pos.remove((1, size))
    return pos


@dataclass(frozen=True)
class UnipotentElement:
    """Unitriangular matrix; diagonal ones implicit, entries keyed by (i, j), i < j."""

    size: int
    p: int
    entries: tuple

    @classmethod
    def from_dict(cls, size, p, d):
        return cls(size, p, tuple(int(d.get(ij, 0)) % p for ij in strict_positions(size)))

    @classmethod
    def from_matrix(cls, X, p):
        X = np.asarray(X, dtype=np.int64) % p
        size = X.shape[0]
        if not (np.array_equal(np.tril(X, -1), 0 * X) and (np.diag(X) == 1).all()):
            raise ValueError("matrix is not unitriangular")
        return cls(size, p, tuple(int(X[i - 1, j - 1]) for i, j in strict_positions(size)))

    @property
    def positions(self):
        return strict_positions(self.size)

    def __getitem__(self, ij):
        return self.entries[self.positions.index(tuple(ij))]

    def matrix(self) -> np.ndarray:
        X = np.eye(self.size, dtype=np.int64)
        for (i, j), v in zip(self.positions, self.entries):
            X[i - 1, j - 1] = v
        return X

    def __mul__(self, other):
        return type(self).from_matrix(self.matrix() @ other.matrix() % self.p, self.p)

    def inverse(self):
        return type(self).from_matrix(linalg.inverse(self.matrix(), self.p), self.p)

    def to_json(self) -> dict:
        return {"size": self.size, "p": self.p,
                "entries": [[i, j, v] for (i, j), v in zip(self.positions, self.entries) if v]}


@dataclass(frozen=True)
class UBarElement(UnipotentElement):
    """Unitriangular matrix with the (1, size) entry omitted: a coset of the corner subgroup."""

    @classmethod
    def from_matrix(cls, X, p):
        X = np.asarray(X, dtype=np.int64) % p
        return cls(X.shape[0], p, tuple(int(X[i - 1, j - 1]) for i, j in strict_positions(X.shape[0], False)))

    @classmethod
    def from_dict(cls, size, p, d):
        return cls(size, p, tuple(int(d.get(ij, 0)) % p for ij in strict_positions(size, False)))

    @property
    def positions(self):
        return strict_positions(self.size, corner=False)

    def __getitem__(self, ij):
        if tuple(ij) == (1, self.size):
            raise KeyError("the corner entry is not defined on the quotient")
        return super().__getitem__(ij)


def proj(u: UnipotentElement, i: int, j: int) -> int:
    if not 1 <= i < j <= u.size:
        raise KeyError(f"({i}, {j}) is not a strictly upper position")
    return u[i, j]


def _encode(entries, p):
    out = 0
    for v in entries:
        out = out * p + int(v)
    return out


def _all_entry_tuples(k, p):
    n = p**k
    idx = np.arange(n)
    cols = [(idx // p ** (k - 1 - t)) % p for t in range(k)]
    return np.stack(cols, axis=1) if k else np.zeros((1, 0), dtype=np.int64)


@lru_cache(maxsize=None)
def u_group(size: int, p: int, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """U_size(F_p), order p^(size(size-1)/2)."""
    return _unitriangular(size, p, True, order_cap)


@lru_cache(maxsize=None)
def ubar_group(size: int, p: int, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """U_size(F_p) modulo its corner entry, order p^(size(size-1)/2 - 1)."""
    return _unitriangular(size, p, False, order_cap)


def _unitriangular(size, p, corner, order_cap):
    linalg.check_prime(p)
    if size < 2:
        raise ValueError("need size >= 2")
    pos = strict_positions(size, corner)
    k = len(pos)
    if p**k > order_cap:
        raise BudgetExceeded("unitriangular group exceeds order cap", order=p**k, order_cap=order_cap)
    E = _all_entry_tuples(k, p)
    n = len(E)
    mats = np.tile(np.eye(size, dtype=np.int64), (n, 1, 1))
    for t, (i, j) in enumerate(pos):
        mats[:, i - 1, j - 1] = E[:, t]
    rows = np.array([i - 1 for i, _ in pos], dtype=np.int64)
    cols = np.array([j - 1 for _, j in pos], dtype=np.int64)
    weights = p ** np.arange(k - 1, -1, -1, dtype=np.int64)
    table = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        prod = np.einsum("ij,bjk->bik", mats[a], mats) % p
        table[a] = prod[:, rows, cols] @ weights
    gens = [_encode([1 if ij == (i, i + 1) else 0 for ij in pos], p) for i in range(1, size)]
    name = f"U{size}(F{p})" if corner else f"Ubar{size}(F{p})"
    labels = [tuple(int(x) for x in e) for e in E]
    kind = "unitriangular" if corner else "ubar"
    return FiniteGroup(table, labels=labels, generators=gens, name=name,
                       meta={"kind": kind, "size": size, "p": p},
                       matrices=mats if corner else None, check=False)


def element(G: FiniteGroup, u: UnipotentElement) -> int:
    return _encode(u.entries, u.p)


def unipotent_of(G: FiniteGroup, g: int):
    size, p = G.meta["size"], G.meta["p"]
    cls = UnipotentElement if G.meta["kind"] == "unitriangular" else UBarElement
    return cls(size, p, G.labels[g])


def entry_map(G: FiniteGroup, i: int, j: int) -> np.ndarray:
    """The (i, j) coordinate of every element of a (bar-)unitriangular group."""
    size = G.meta["size"]
    pos = strict_positions(size, G.meta["kind"] == "unitriangular")
    if (i, j) not in pos:
        raise KeyError(f"({i}, {j}) is not a coordinate of {G.name}")
    t = pos.index((i, j))
    return np.array([lab[t] for lab in G.labels], dtype=np.int64)


@lru_cache(maxsize=None)
def corner_quotient(size: int, p: int) -> GroupHom:
    """U_size -> Ubar_size, forgetting the corner entry; kernel is the corner subgroup."""
    U, Ub = u_group(size, p), ubar_group(size, p)
    t = strict_positions(size).index((1, size))
    images = [_encode(lab[:t] + lab[t + 1:], p) for lab in U.labels]
    return GroupHom(U, Ub, images, check=U.order <= 4096)


@lru_cache(maxsize=None)
def superdiagonal_quotient(size: int, p: int, bar: bool = False) -> GroupHom:
    """U_size (or Ubar_size) -> F_p^(size-1) reading the superdiagonal."""
    U = ubar_group(size, p) if bar else u_group(size, p)
    V = elementary_abelian(p, size - 1)
    cols = [entry_map(U, i, i + 1) for i in range(1, size)]
    images = np.stack(cols, axis=1) @ (p ** np.arange(size - 2, -1, -1, dtype=np.int64))
    return GroupHom(U, V, images, check=U.order <= 4096)


# -- the extension 1 -> A -> U_4 -> F_p^3 -> 1 ------------------------------

# e1 = I + E24, e2 = I + E13, e3 = I + E14
KERNEL_BASIS_POSITIONS = ((2, 4), (1, 3), (1, 4))


def kernel_element(coords, p: int) -> UnipotentElement:
    a = dict(zip(KERNEL_BASIS_POSITIONS, (int(c) % p for c in coords)))
    return UnipotentElement.from_dict(4, p, a)


def kernel_coords(u: UnipotentElement) -> np.ndarray:
    """Coordinates of an element of A in the basis (e1, e2, e3)."""
    for ij in ((1, 2), (2, 3), (3, 4)):
        if u[ij]:
            raise ValueError("element is not in the kernel A")
    return np.array([u[ij] for ij in KERNEL_BASIS_POSITIONS], dtype=np.int64)


def section(x: int, y: int, z: int, p: int) -> UnipotentElement:
    """The superdiagonal-only lift of (x, y, z); sends 0 to the identity."""
    return UnipotentElement.from_dict(4, p, {(1, 2): x, (2, 3): y, (3, 4): z})


def psi(x: int, y: int, z: int, p: int) -> np.ndarray:
    """Matrix of conjugation by a lift of (x, y, z) on A, basis (e1, e2, e3).

    Column k holds the coordinates of s e_k s^-1.
    """
    s = section(x, y, z, p)
    s_inv = s.inverse()
    cols = []
    for k in range(3):
        e = kernel_element(np.eye(3, dtype=np.int64)[k], p)
        cols.append(kernel_coords(s * e * s_inv))
    return np.stack(cols, axis=1) % p


def psi_prime(x: int, y: int, z: int, p: int) -> np.ndarray:
    """Matrix of the dual action (g phi)(a) = phi(g^-1 . a) in the dual basis.

    Entry (j, i) is (g e'_i)(e_j) = e'_i(psi(g^-1) e_j), so the matrix is the
    transpose of psi at the inverse element.
    """
    return psi(-x % p, -y % p, -z % p, p).T.copy()


def psi_closed_form(x, y, z, p):
    return np.array([[1, 0, 0], [0, 1, 0], [x, -z, 1]], dtype=np.int64) % p


def psi_prime_closed_form(x, y, z, p):
    return np.array([[1, 0, -x], [0, 1, z], [0, 0, 1]], dtype=np.int64) % p


@lru_cache(maxsize=None)
def kernel_module(p: int) -> GModule:
    """A as an F_p^3-module through psi."""
    V = elementary_abelian(p, 3)
    action = np.stack([psi(*lab, p) for lab in V.labels])
    return GModule(V, p, action, name="A")


@lru_cache(maxsize=None)
def dual_kernel_module(p: int) -> GModule:
    V = elementary_abelian(p, 3)
    action = np.stack([psi_prime(*lab, p) for lab in V.labels])
    return GModule(V, p, action, name="A'")


def extension_cocycle_value(g, h, p: int) -> np.ndarray:
    """s(g) s(h) s(gh)^-1 in A, for g, h in F_p^3 given as coordinate triples."""
    gh = tuple((a + b) % p for a, b in zip(g, h))
    return kernel_coords(section(*g, p) * section(*h, p) * section(*gh, p).inverse())


@lru_cache(maxsize=None)
def extension_cocycle(p: int) -> Cochain:
    """The 2-cocycle of U_4 -> F_p^3 with values in (A, psi) for the superdiagonal section."""
    M = kernel_module(p)
    V = M.group
    vals = np.zeros((V.order, V.order, 3), dtype=np.int64)
    for g in range(V.order):
        for h in range(V.order):
            vals[g, h] = extension_cocycle_value(V.labels[g], V.labels[h], p)
    return Cochain(M, vals)


@lru_cache(maxsize=None)
def translation_group(p: int):
    """The group of matrices [[1,0,a],[0,1,b],[0,0,1]] over F_p, order p^2."""
    from .groups import from_matrix_generators
    gens = [[[1, 0, 1], [0, 1, 0], [0, 0, 1]], [[1, 0, 0], [0, 1, 1], [0, 0, 1]]]
    G, _ = from_matrix_generators(p, 3, gens, name=f"T3(F{p})")
    return G
