"""Inhomogeneous cochains C^n(G, M) over F_p, coboundary, cup product, H^n.

A degree-n cochain is stored as an array of shape ``(|G|,)*n + (dim,)``.
Cochains are not normalized.  The coboundary is

    (df)(g1..g_{n+1}) = g1.f(g2..g_{n+1})
                        + sum_i (-1)^i f(.., g_i g_{i+1}, ..)
                        + (-1)^{n+1} f(g1..g_n).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from . import linalg
from .errors import (BudgetExceeded, DimensionMismatch, HomomorphismError, NotACocycleError,
                     NotASubgroupError, UnsupportedCoefficients)
from .groups import FiniteGroup, GroupHom, Subgroup, cyclic_subgroups

DEFAULT_DENSE_BUDGET = 2**24
DEFAULT_SOLVER_BUDGET = 2**26


class GModule:
    """F_p^dim with a left action of ``group`` given by one matrix per element."""

    def __init__(self, group: FiniteGroup, p: int, action, *, name="M", check=True):
        self.group = group
        self.p = linalg.check_prime(p)
        action = np.asarray(action, dtype=np.int64) % self.p
        if action.ndim != 3 or action.shape[0] != group.order or action.shape[1] != action.shape[2]:
            raise DimensionMismatch(f"action must have shape (|G|, d, d), got {action.shape}")
        self.action = action
        self.action.setflags(write=False)
        self.dim = action.shape[1]
        self.name = name
        self._pullbacks = {}
        if check:
            self._check()

    def _check(self):
        G, p, act = self.group, self.p, self.action
        if not np.array_equal(act[G.identity], np.eye(self.dim, dtype=np.int64)):
            raise HomomorphismError("identity does not act trivially")
        prod = np.einsum("gij,hjk->ghik", act, act) % p
        bad = np.argwhere((prod != act[G.mul]).any(axis=(2, 3)))
        if bad.size:
            raise HomomorphismError("action is not a homomorphism", witness=tuple(int(x) for x in bad[0]))

    def __repr__(self):
        return f"GModule({self.name}, group={self.group.name}, p={self.p}, dim={self.dim})"

    @cached_property
    def is_trivial(self) -> bool:
        return bool((self.action == np.eye(self.dim, dtype=np.int64)).all())

    def pullback(self, h: GroupHom) -> "GModule":
        """The module over ``h.source`` where g acts as h(g)."""
        if h.target is not self.group:
            raise HomomorphismError("homomorphism does not land in the module's group")
        key = id(h)
        if key not in self._pullbacks:
            M = GModule(h.source, self.p, self.action[h.images], name=f"{self.name}*", check=False)
            self._pullbacks[key] = (h, M)
        return self._pullbacks[key][1]

    def restrict(self, S: Subgroup) -> "GModule":
        if S.parent is not self.group:
            raise NotASubgroupError("subgroup of a different group")
        return self.pullback(S.embedding)

    @cached_property
    def _cache(self) -> dict:
        return {}


def trivial_module(G: FiniteGroup, p: int, dim: int = 1) -> GModule:
    """The trivial module F_p^dim; one shared instance per (G, p, dim)."""
    cache = G.__dict__.setdefault("_trivial_modules", {})
    if (p, dim) not in cache:
        act = np.broadcast_to(np.eye(dim, dtype=np.int64), (G.order, dim, dim))
        cache[p, dim] = GModule(G, p, act, name="F_p" if dim == 1 else f"F_p^{dim}", check=False)
    return cache[p, dim]


def module_from_generators(G: FiniteGroup, p: int, gen_matrices, gens=None, name="M") -> GModule:
    """Extend an action given on generators to all of G (validated)."""
    gens = list(G.gens if gens is None else gens)
    mats = [linalg.as_mat(X, p) for X in gen_matrices]
    if len(mats) != len(gens):
        raise DimensionMismatch("one matrix per generator is required")
    d = mats[0].shape[0] if mats else 1
    act = [None] * G.order
    act[G.identity] = np.eye(d, dtype=np.int64)
    queue = [G.identity]
    for g in queue:
        for s, X in zip(gens, mats):
            h = int(G.mul[g, s])
            if act[h] is None:
                act[h] = (act[g] @ X) % p
                queue.append(h)
    if any(a is None for a in act):
        raise HomomorphismError("given elements do not generate the group")
    return GModule(G, p, np.stack(act), name=name)


def natural_module(G: FiniteGroup, p: int) -> GModule:
    """Column vectors F_p^d acted on by a matrix group through its matrices."""
    if G.matrices is None:
        raise UnsupportedCoefficients(f"{G.name} carries no matrices")
    return GModule(G, p, G.matrices, name=f"F_p^{G.matrices.shape[1]}")


class Cochain:
    def __init__(self, module: GModule, values):
        self.module = module
        v = np.asarray(values, dtype=np.int64) % module.p
        N = module.group.order
        if v.ndim < 1 or v.shape[-1] != module.dim or any(s != N for s in v.shape[:-1]):
            raise DimensionMismatch(f"cochain table has shape {v.shape}")
        self.values = v
        self.degree = v.ndim - 1

    @classmethod
    def zero(cls, module: GModule, degree: int) -> "Cochain":
        return cls(module, np.zeros((module.group.order,) * degree + (module.dim,), dtype=np.int64))

    @classmethod
    def from_flat(cls, module: GModule, degree: int, vec) -> "Cochain":
        shape = (module.group.order,) * degree + (module.dim,)
        return cls(module, np.asarray(vec, dtype=np.int64).reshape(shape))

    @property
    def p(self) -> int:
        return self.module.p

    @property
    def group(self) -> FiniteGroup:
        return self.module.group

    def flat(self) -> np.ndarray:
        return self.values.reshape(-1)

    def __call__(self, *gs):
        return self.values[tuple(gs)]

    def _compatible(self, other):
        if not isinstance(other, Cochain) or other.module is not self.module or other.degree != self.degree:
            raise DimensionMismatch("cochains live in different spaces")

    def __add__(self, other):
        self._compatible(other)
        return Cochain(self.module, self.values + other.values)

    def __sub__(self, other):
        self._compatible(other)
        return Cochain(self.module, self.values - other.values)

    def __neg__(self):
        return Cochain(self.module, -self.values)

    def __mul__(self, scalar):
        return Cochain(self.module, self.values * int(scalar))

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, Cochain) and other.module is self.module
                and np.array_equal(other.values, self.values))

    def __hash__(self):
        return hash((id(self.module), self.values.tobytes()))

    def is_zero(self) -> bool:
        return not self.values.any()

    def __repr__(self):
        return f"Cochain(degree={self.degree}, module={self.module.name})"


def character(G: FiniteGroup, p: int, values, module: Optional[GModule] = None) -> Cochain:
    """A 1-cochain with trivial F_p coefficients from its values on all elements."""
    module = module or trivial_module(G, p)
    return Cochain(module, np.asarray(values, dtype=np.int64).reshape(G.order, 1))


def _arg_grids(N: int, k: int):
    return [np.arange(N).reshape((1,) * i + (N,) + (1,) * (k - 1 - i)) for i in range(k)]


def coboundary(f: Cochain) -> Cochain:
    M, n = f.module, f.degree
    G, p = M.group, M.p
    vals = f.values
    if M.is_trivial:
        out = np.broadcast_to(vals, (G.order,) + vals.shape).copy()
    else:
        out = np.einsum("aij,...j->a...i", M.action, vals)
    g = _arg_grids(G.order, n + 1)
    for i in range(1, n + 1):
        args = g[:i - 1] + [G.mul[g[i - 1], g[i]]] + g[i + 1:]
        term = vals[tuple(args)]
        out = out - term if i % 2 else out + term
    last = vals[(Ellipsis, None, slice(None))] if n else vals[None, :]
    out = out - last if n % 2 == 0 else out + last
    return Cochain(M, out % p)


def is_cocycle(f: Cochain, full_limit: int = 2**22) -> bool:
    """d f == 0, computed one first argument at a time when d f would be large."""
    M, n = f.module, f.degree
    G, p = M.group, M.p
    N = G.order
    if N ** (n + 1) * M.dim <= full_limit or n == 0:
        return coboundary(f).is_zero()
    vals = f.values
    g = _arg_grids(N, n)
    for a in range(N):
        out = vals if M.is_trivial else np.einsum("ij,...j->...i", M.action[a], vals)
        out = out - vals[G.mul[a]]
        for i in range(2, n + 1):
            args = [a] + g[:i - 2] + [G.mul[g[i - 2], g[i - 1]]] + g[i:]
            term = vals[tuple(args)]
            out = out - term if i % 2 else out + term
        last = vals[a][(Ellipsis, None, slice(None))]
        out = out - last if n % 2 == 0 else out + last
        if (out % p).any():
            return False
    return True


def cup(f: Cochain, g: Cochain) -> Cochain:
    """(f u g)(x1..xk, y1..yl) = f(x1..xk) g(y1..yl), trivial F_p coefficients."""
    for c in (f, g):
        if not c.module.is_trivial or c.module.dim != 1:
            raise UnsupportedCoefficients("cup product is implemented for trivial F_p coefficients only")
    if f.group is not g.group or f.p != g.p:
        raise DimensionMismatch("cochains over different groups or fields")
    vals = np.multiply.outer(f.values[..., 0], g.values[..., 0]) % f.p
    return Cochain(f.module, vals[..., None])


def pullback(f: Cochain, h: GroupHom) -> Cochain:
    """Precompose every argument of ``f`` with ``h``; coefficients transported along ``h``."""
    M = f.module.pullback(h)
    if f.degree == 0:
        return Cochain(M, f.values)
    idx = np.ix_(*([h.images] * f.degree))
    return Cochain(M, f.values[idx])


def restrict(f, S: Subgroup):
    """Restrict a cochain or class to a subgroup."""
    if isinstance(f, CohomClass):
        return CohomClass(restrict(f.representative, S), f.certified_cocycle)
    if S.parent is not f.group:
        raise NotASubgroupError("subgroup of a different group")
    return pullback(f, S.embedding)


# -- dense matrices -----------------------------------------------------------


def coboundary_matrix(M: GModule, n: int, budget: int = DEFAULT_DENSE_BUDGET) -> np.ndarray:
    """Matrix of d: C^n -> C^{n+1} on flattened tables."""
    key = ("dmat", n)
    if key in M._cache:
        return M._cache[key]
    G, d, p = M.group, M.dim, M.p
    N = G.order
    rows, cols = N ** (n + 1) * d, N ** n * d
    if rows * cols > budget:
        raise BudgetExceeded("dense coboundary matrix exceeds budget", group_order=N, degree=n,
                             dim=d, rows=rows, cols=cols, budget=budget)
    D = np.zeros((rows, cols), dtype=np.int64)
    grids = np.indices((N,) * (n + 1), dtype=np.int64).reshape(n + 1, -1)
    base = np.ravel_multi_index(tuple(grids), (N,) * (n + 1))
    ii = np.arange(d)
    row = base[:, None] * d + ii[None, :]
    # g1.f(g2..): row (g, i), column (g2.., j), entry action[g1][i, j]
    tail = base % (N ** n)
    r = np.broadcast_to(row[:, :, None], (len(base), d, d))
    c = np.broadcast_to(tail[:, None, None] * d + ii[None, None, :], (len(base), d, d))
    np.add.at(D, (r.ravel(), c.ravel()), M.action[grids[0]].ravel())
    for k in range(1, n + 2):
        if k <= n:
            args = list(grids[:k - 1]) + [G.mul[grids[k - 1], grids[k]]] + list(grids[k + 1:])
        else:
            args = list(grids[:n])
        flat = np.ravel_multi_index(tuple(args), (N,) * n) if n else np.zeros(len(base), dtype=np.int64)
        sign = 1 if k % 2 == 0 else -1
        col = flat[:, None] * d + ii[None, :]
        np.add.at(D, (row.ravel(), col.ravel()), sign)
    D %= p
    D.setflags(write=False)
    M._cache[key] = D
    return D


def cocycle_space(n: int, M: GModule, *, method: str = "auto", budget: int = DEFAULT_DENSE_BUDGET) -> np.ndarray:
    """Basis of Z^n(G, M) as rows of flattened tables."""
    if n == 1 and method in ("auto", "generators"):
        return solve_one_cochains(M, Cochain.zero(M, 2)).linear_basis()
    return linalg.kernel(coboundary_matrix(M, n, budget), M.p)


def coboundary_space(n: int, M: GModule, *, budget: int = DEFAULT_DENSE_BUDGET) -> np.ndarray:
    """Basis of B^n(G, M) as rows."""
    size = M.group.order ** n * M.dim
    if n == 0:
        return np.zeros((0, size), dtype=np.int64)
    D = coboundary_matrix(M, n - 1, budget)
    return linalg.row_basis(D.T, M.p)


def h_dim(n: int, M: GModule, *, budget: int = DEFAULT_DENSE_BUDGET) -> int:
    z = cocycle_space(n, M, budget=budget)
    b = coboundary_space(n, M, budget=budget)
    return len(z) - len(b)


def class_coordinates(M: GModule, n: int, budget: int = DEFAULT_DENSE_BUDGET) -> np.ndarray:
    """Rows annihilating B^n; ``coords @ z`` is injective on C^n / B^n."""
    key = ("coords", n)
    if key not in M._cache:
        size = M.group.order ** n * M.dim
        if n == 0:
            M._cache[key] = np.eye(size, dtype=np.int64)
        else:
            M._cache[key] = linalg.left_kernel(coboundary_matrix(M, n - 1, budget), M.p)
    return M._cache[key]


def class_key(z: Cochain, budget: int = DEFAULT_DENSE_BUDGET) -> tuple:
    """A hashable coordinate vector; equal keys iff the difference is a coboundary."""
    N = class_coordinates(z.module, z.degree, budget)
    return tuple(int(x) for x in (N @ z.flat()) % z.p)


# -- the one-cochain solver ---------------------------------------------------


@dataclass
class OneCochainSolutions:
    """Solutions (a, y) of  d a = target + sum_j y_j extras[j]  with a in C^1.

    ``forms[g]`` expresses a(g) as an affine function of the parameters: the
    values a(e), a(s) for each generator s, then y.  Every pair (g, h) of
    group elements contributes its equation; generators only parametrize.
    """

    module: GModule
    forms: np.ndarray
    n_a: int
    n_y: int
    solution: linalg.AffineSolutionSet

    @property
    def consistent(self) -> bool:
        return self.solution.consistent

    def cochain(self, params, affine: bool = True) -> Cochain:
        nv = self.n_a + self.n_y
        vals = self.forms[..., :nv] @ np.asarray(params, dtype=np.int64)
        if affine:
            vals = vals + self.forms[..., nv]
        return Cochain(self.module, vals)

    def coefficients(self, params) -> np.ndarray:
        return np.asarray(params, dtype=np.int64)[self.n_a:] % self.module.p

    def particular(self) -> Optional[Cochain]:
        if not self.consistent:
            return None
        return self.cochain(self.solution.particular)

    def linear_basis(self) -> np.ndarray:
        """Flattened cochain parts of the homogeneous solutions (y = 0 only)."""
        vecs = []
        for k in self.solution.kernel_basis:
            if self.n_y and self.coefficients(k).any():
                continue
            vecs.append(self.cochain(k, affine=False).flat())
        if not vecs:
            return np.zeros((0, self.module.group.order * self.module.dim), dtype=np.int64)
        return linalg.row_basis(np.array(vecs), self.module.p)


def solve_one_cochains(M: GModule, target: Cochain, extras: Sequence[Cochain] = (),
                       budget: int = DEFAULT_SOLVER_BUDGET) -> OneCochainSolutions:
    """Describe every 1-cochain a and coefficients y with d a = target + sum y_j extras_j."""
    G, p, d = M.group, M.p, M.dim
    for c in [target, *extras]:
        if c.module is not M or c.degree != 2:
            raise DimensionMismatch("right-hand sides must be 2-cochains in the same module")
    N = G.order
    gens = list(G.gens)
    n_a = d * (1 + len(gens))
    n_y = len(extras)
    nv = n_a + n_y
    if N * N * d * (nv + 1) > budget:
        raise BudgetExceeded("one-cochain system exceeds budget", group_order=N, dim=d,
                             unknowns=nv, budget=budget)
    # C[g, h] as a (d, nv+1) form: y columns carry extras, last column the target
    C = np.zeros((N, N, d, nv + 1), dtype=np.int64)
    for j, c in enumerate(extras):
        C[..., n_a + j] = c.values
    C[..., nv] = target.values
    forms = np.full((N, d, nv + 1), -1, dtype=np.int64)
    eye = np.eye(d, dtype=np.int64)
    sel = []
    for k in range(1 + len(gens)):
        S = np.zeros((d, nv + 1), dtype=np.int64)
        S[:, k * d:(k + 1) * d] = eye
        sel.append(S)
    known = np.zeros(N, dtype=bool)
    forms[G.identity] = sel[0]
    known[G.identity] = True
    queue = [G.identity]
    for k, s in enumerate(gens):
        if not known[s]:
            forms[s] = sel[k + 1]
            known[s] = True
            queue.append(s)
    # a(g s) = g.a(s) + a(g) - (target + y.extras)(g, s)
    for g in queue:
        for k, s in enumerate(gens):
            h = int(G.mul[g, s])
            if not known[h]:
                forms[h] = (M.action[g] @ sel[k + 1] + forms[g] - C[g, s]) % p
                known[h] = True
                queue.append(h)
    if not known.all():
        raise HomomorphismError("generators do not generate the group")
    if M.is_trivial:
        act_h = np.broadcast_to(forms[None], (N, N, d, nv + 1))
    else:
        act_h = np.einsum("gij,hjk->ghik", M.action, forms)
    E = (act_h - forms[G.mul] + forms[:, None] - C) % p
    E = E.reshape(-1, nv + 1)
    if (nv + 1) * np.log2(p) < 62:
        codes = E @ (p ** np.arange(nv, -1, -1, dtype=np.int64))
        E = E[np.unique(codes, return_index=True)[1]]
    else:
        E = np.unique(E, axis=0)
    sol = linalg.solve_affine(E[:, :nv], (-E[:, nv]) % p, p)
    return OneCochainSolutions(M, forms % p, n_a, n_y, sol)


# -- cohomology classes -------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CohomClass:
    representative: Cochain
    certified_cocycle: bool = True

    @property
    def degree(self) -> int:
        return self.representative.degree

    @property
    def module(self) -> GModule:
        return self.representative.module

    def __add__(self, other):
        return CohomClass(self.representative + other.representative)

    def __sub__(self, other):
        return CohomClass(self.representative - other.representative)

    def __mul__(self, scalar):
        return CohomClass(self.representative * scalar)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return is_coboundary(self.representative) is not None

    def __repr__(self):
        return f"CohomClass(degree={self.degree}, module={self.module.name})"


def make_class(z: Cochain) -> CohomClass:
    if not is_cocycle(z):
        raise NotACocycleError("representative is not a cocycle")
    return CohomClass(z, True)


def same_class(a: CohomClass, b: CohomClass) -> bool:
    return (a - b).is_zero()


def is_coboundary(z: Cochain, *, budget: int = DEFAULT_DENSE_BUDGET) -> Optional[Cochain]:
    """A cochain w with d w = z, or ``None`` when z is not a coboundary."""
    if z.degree == 0:
        raise ValueError("degree-0 cochains are not in the image of the coboundary")
    M = z.module
    if z.degree == 2:
        # a solution certifies z as a cocycle; only the failure path needs the check
        w = Cochain.zero(M, 1) if z.is_zero() else solve_one_cochains(M, z).particular()
        if w is None and not is_cocycle(z):
            raise NotACocycleError("input is not a cocycle")
        return w
    if not is_cocycle(z):
        raise NotACocycleError("input is not a cocycle")
    if z.is_zero():
        return Cochain.zero(M, z.degree - 1)
    D = coboundary_matrix(M, z.degree - 1, budget)
    sol = linalg.solve_affine(D, z.flat(), M.p)
    if not sol.consistent:
        return None
    return Cochain.from_flat(M, z.degree - 1, sol.particular)


def h1_basis(M: GModule) -> list:
    """Cocycles whose classes form a basis of H^1(G, M)."""
    key = ("h1",)
    if key not in M._cache:
        Z = cocycle_space(1, M)
        B = coboundary_space(1, M)
        M._cache[key] = [Cochain.from_flat(M, 1, v) for v in linalg.complement_basis(Z, B, M.p)]
    return M._cache[key]


def h1_star(M: GModule, method: str = "auto") -> list:
    """Basis of H^1_*(G, M): classes restricting to coboundaries on every cyclic subgroup.

    ``method`` selects how Z^1 is computed (see ``cocycle_space``).
    """
    G, p = M.group, M.p
    Z = cocycle_space(1, M, method=method)
    if len(Z) == 0:
        return []
    blocks = []
    for C in cyclic_subgroups(G):
        MC = M.restrict(C)
        mem = np.asarray(C.members)
        restricted = Z.reshape(len(Z), G.order, M.dim)[:, mem, :].reshape(len(Z), -1)
        ann = class_coordinates(MC, 1)
        if len(ann):
            blocks.append((ann @ restricted.T) % p)
    coeffs = linalg.kernel(np.vstack(blocks), p) if blocks else np.eye(len(Z), dtype=np.int64)
    K = (coeffs @ Z) % p if len(coeffs) else np.zeros((0, Z.shape[1]), dtype=np.int64)
    B = coboundary_space(1, M)
    return [CohomClass(Cochain.from_flat(M, 1, v)) for v in linalg.complement_basis(K, B, p)]


def restriction_kernel(n: int, M: GModule, subgroups: Sequence[Subgroup],
                       budget: int = DEFAULT_DENSE_BUDGET):
    """Cocycles spanning ker(H^n(G, M) -> prod H^n(S, M)) modulo B^n(G, M)."""
    G, p = M.group, M.p
    Z = cocycle_space(n, M, budget=budget)
    if len(Z) == 0:
        return []
    blocks = []
    for S in subgroups:
        MS = M.restrict(S)
        mem = np.asarray(S.members)
        tab = Z.reshape((len(Z),) + (G.order,) * n + (M.dim,))
        tab = tab[(slice(None),) + np.ix_(*([mem] * n)) + (slice(None),)] if n else tab
        ann = class_coordinates(MS, n, budget)
        if len(ann):
            blocks.append((ann @ tab.reshape(len(Z), -1).T) % p)
    coeffs = linalg.kernel(np.vstack(blocks), p) if blocks else np.eye(len(Z), dtype=np.int64)
    K = (coeffs @ Z) % p if len(coeffs) else np.zeros((0, Z.shape[1]), dtype=np.int64)
    B = coboundary_space(n, M, budget=budget)
    return [Cochain.from_flat(M, n, v) for v in linalg.complement_basis(K, B, p)]
