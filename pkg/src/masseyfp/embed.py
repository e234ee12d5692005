"""Weak embedding problems, lifts, and the obstruction class of an extension.

A weak embedding problem is a pair (alpha: G -> Ubar, f: U -> Ubar) with f
surjective; a weak solution is beta: G -> U with f beta = alpha.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from . import linalg
from .cohomology import (Cochain, CohomClass, GModule, coboundary_space, cup, is_coboundary, is_cocycle,
                         pullback, restriction_kernel, trivial_module)
from .errors import (DimensionMismatch, HomomorphismError, InvalidDefiningSystem,
                     NonAbelianKernelError, PreconditionError)
from .groups import FiniteGroup, GroupHom, Subgroup, is_surjective, search_homs
from .massey import (DefiningSystem, MasseyVerdict, _first_violation, _rep, positions, triple_massey,
                     undefined_witness, zero_witness)
from . import unipotent as un


# -- extensions ---------------------------------------------------------------


class GroupExtension:
    """A surjection f: U -> Ubar with elementary abelian kernel, a section and its cocycle.

    ``basis`` lists kernel elements (indices in U) forming an F_p-basis;
    ``section[u_bar]`` is a preimage, with identity sent to identity.
    """

    def __init__(self, f: GroupHom, p: int, basis=None, section=None):
        self.f = f
        self.p = linalg.check_prime(p)
        U, Ub = f.source, f.target
        if not is_surjective(f):
            raise HomomorphismError("extension map is not surjective")
        K = f.kernel()
        mem = np.asarray(K.members)
        sub = U.mul[np.ix_(mem, mem)]
        if not np.array_equal(sub, sub.T):
            raise NonAbelianKernelError(f"kernel of {U.name} -> {Ub.name} is not abelian")
        if any(U.power(int(k), p) != U.identity for k in mem):
            raise NonAbelianKernelError("kernel is not elementary abelian of exponent p")
        self.kernel = K
        self.basis = list(basis) if basis is not None else self._greedy_basis(mem)
        self.coords = self._coordinates()
        if len(self.coords) != len(mem):
            raise ValueError("given kernel basis does not span the kernel")
        if section is None:
            section = np.full(Ub.order, -1, dtype=np.int64)
            for u in range(U.order - 1, -1, -1):
                section[f.images[u]] = u
            section[Ub.identity] = U.identity
        self.section = np.asarray(section, dtype=np.int64)
        if not np.array_equal(f.images[self.section], np.arange(Ub.order)):
            raise ValueError("section is not a right inverse of f")

    def _span(self, elems):
        U, p = self.f.source, self.p
        out = {}
        for coeffs in np.ndindex(*([p] * len(elems))):
            g = U.identity
            for b, c in zip(elems, coeffs):
                g = int(U.mul[g, U.power(b, c)])
            out[g] = np.array(coeffs, dtype=np.int64)
        return out

    def _greedy_basis(self, mem):
        basis = []
        span = {self.f.source.identity}
        for k in mem:
            if int(k) not in span:
                basis.append(int(k))
                span = set(self._span(basis))
        return basis

    def _coordinates(self):
        return self._span(self.basis)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords_of(self, u: int) -> np.ndarray:
        return self.coords[int(u)]

    @cached_property
    def module(self) -> GModule:
        """The kernel as a module over Ubar: conjugation by section elements."""
        U, Ub = self.f.source, self.f.target
        act = np.zeros((Ub.order, self.dim, self.dim), dtype=np.int64)
        for ub in range(Ub.order):
            s = int(self.section[ub])
            s_inv = int(U.inv[s])
            for k, b in enumerate(self.basis):
                act[ub][:, k] = self.coords_of(U.m(s, b, s_inv))
        return GModule(Ub, self.p, act, name="ker")

    @cached_property
    def cocycle(self) -> Cochain:
        """eps(g, h) = s(g) s(h) s(gh)^-1."""
        U, Ub = self.f.source, self.f.target
        s = self.section
        vals = np.zeros((Ub.order, Ub.order, self.dim), dtype=np.int64)
        for g in range(Ub.order):
            for h in range(Ub.order):
                gh = int(Ub.mul[g, h])
                vals[g, h] = self.coords_of(U.m(int(s[g]), int(s[h]), int(U.inv[s[gh]])))
        return Cochain(self.module, vals)


_U4_EXTENSIONS = {}


def u4_extension(p: int) -> GroupExtension:
    """1 -> A -> U_4(F_p) -> F_p^3 -> 1 with basis (e1, e2, e3) and the superdiagonal section."""
    if p not in _U4_EXTENSIONS:
        f = un.superdiagonal_quotient(4, p)
        U = f.source
        basis = [un.element(U, un.kernel_element(np.eye(3, dtype=np.int64)[k], p)) for k in range(3)]
        section = [un.element(U, un.section(*lab, p)) for lab in f.target.labels]
        _U4_EXTENSIONS[p] = GroupExtension(f, p, basis, section)
    return _U4_EXTENSIONS[p]


_CORNER_EXTENSIONS = {}


def corner_extension(size: int, p: int) -> GroupExtension:
    """0 -> F_p -> U_size(F_p) -> Ubar_size(F_p) -> 1."""
    key = (size, p)
    if key not in _CORNER_EXTENSIONS:
        _CORNER_EXTENSIONS[key] = GroupExtension(un.corner_quotient(size, p), p)
    return _CORNER_EXTENSIONS[key]


# -- lifts --------------------------------------------------------------------


def _fibers(f: GroupHom) -> list:
    cache = f.__dict__.setdefault("_fibers", None)
    if cache is None:
        order = np.argsort(f.images, kind="stable")
        bounds = np.searchsorted(f.images[order], np.arange(f.target.order + 1))
        cache = [order[bounds[i]:bounds[i + 1]].tolist() for i in range(f.target.order)]
        f.__dict__["_fibers"] = cache
    return cache


def _default_surjection(alpha: GroupHom) -> GroupHom:
    meta = alpha.target.meta
    if meta.get("kind") == "ubar":
        return un.corner_quotient(meta["size"], meta["p"])
    raise ValueError(f"no default extension for target {alpha.target.name}; pass f explicitly")


def lift(alpha: GroupHom, f: Optional[GroupHom] = None, budget: Optional[int] = None) -> Optional[GroupHom]:
    """A homomorphism beta with f beta = alpha, or ``None`` if none exists.

    Backtracks over images of a greedy generating set of the source, drawing
    each image from the fiber over alpha(generator).  The search is complete.
    """
    f = _default_surjection(alpha) if f is None else f
    if f.target is not alpha.target:
        raise HomomorphismError("alpha and f have different targets")
    G = alpha.source
    gens = list(G.search_generators)
    fib = _fibers(f)
    cands = [fib[alpha(s)] for s in gens]
    for beta in search_homs(G, f.source, cands, gens, budget=budget):
        return beta
    return None


# -- the Dwyer correspondence -------------------------------------------------


def ds_to_hom(ds: DefiningSystem, p: Optional[int] = None) -> GroupHom:
    """The homomorphism G -> Ubar_{n+1}(F_p) with (i, j) entry -a_ij."""
    v = _first_violation(ds)
    if v is not None:
        raise InvalidDefiningSystem(f"condition ({v.condition}) fails at {v.position}: {v.detail}")
    p = ds.module.p if p is None else p
    size = ds.n + 1
    Ub = un.ubar_group(size, p)
    pos = un.strict_positions(size, corner=False)
    ent = np.stack([(-ds[ij].values[:, 0]) % p for ij in pos], axis=1)
    images = ent @ (p ** np.arange(len(pos) - 1, -1, -1, dtype=np.int64))
    return GroupHom(ds.group, Ub, images)


def hom_to_ds(rho_bar: GroupHom) -> DefiningSystem:
    """Inverse of ``ds_to_hom``: a_ij = -(rho_bar)_ij."""
    meta = rho_bar.target.meta
    if meta.get("kind") != "ubar":
        raise DimensionMismatch(f"target {rho_bar.target.name} is not a corner quotient of U_{{n+1}}")
    size, p = meta["size"], meta["p"]
    M = trivial_module(rho_bar.source, p)
    entries = {}
    for (i, j) in positions(size - 1):
        col = un.entry_map(rho_bar.target, i, j)[rho_bar.images]
        entries[i, j] = Cochain(M, (-col % p)[:, None])
    return DefiningSystem(size - 1, entries)


def superdiagonal(rho: GroupHom) -> GroupHom:
    """Compose with the superdiagonal projection onto F_p^n."""
    meta = rho.target.meta
    q = un.superdiagonal_quotient(meta["size"], meta["p"], bar=meta["kind"] == "ubar")
    return q.compose(rho)


def dwyer_search(inputs: Sequence, budget: int = 2**20) -> MasseyVerdict:
    """Decide <inputs> by searching homs into Ubar_{n+1} with superdiagonal -inputs, then lifts."""
    chis = [_rep(c) for c in inputs]
    n = len(chis)
    M = chis[0].module
    G, p = M.group, M.p
    for c in chis:
        if not is_cocycle(c):
            raise HomomorphismError("inputs must be cocycles")
    size = n + 1
    Ub = un.ubar_group(size, p)
    sd = np.stack([un.entry_map(Ub, i, i + 1) for i in range(1, size)], axis=1)
    gens = list(G.search_generators)
    cands = []
    for s in gens:
        want = np.array([(-c.values[s, 0]) % p for c in chis])
        cands.append(np.flatnonzero((sd == want).all(axis=1)).tolist())
    first = None
    f = un.corner_quotient(size, p)
    for rho_bar in search_homs(G, Ub, cands, gens, budget=budget):
        if first is None:
            first = rho_bar
        beta = lift(rho_bar, f)
        if beta is not None:
            return MasseyVerdict("contains_zero", "dwyer", n, "lift",
                                 {"rho_bar": rho_bar, "lift": beta, "defining_system": hom_to_ds(rho_bar)})
    if first is None:
        wit = undefined_witness(*chis) if n == 3 else None
        return MasseyVerdict("undefined", "dwyer", n, "cup" if wit else None, wit)
    return MasseyVerdict("defined_not_vanishing", "dwyer", n, "rho_bar", first)


# -- obstructions -------------------------------------------------------------


@dataclass(eq=False)
class WeakEmbeddingProblem:
    alpha: GroupHom
    extension: GroupExtension

    def __post_init__(self):
        if self.alpha.target is not self.extension.f.target:
            raise HomomorphismError("alpha does not land in the quotient of the extension")

    @property
    def f(self) -> GroupHom:
        return self.extension.f

    @property
    def kernel(self):
        return self.extension.kernel

    @property
    def kernel_module(self) -> GModule:
        """The kernel as a module over Ubar."""
        return self.extension.module

    @property
    def pulled_module(self) -> GModule:
        """The kernel as a module over G, through alpha."""
        return self.extension.module.pullback(self.alpha)

    def induced(self, S: Subgroup) -> "WeakEmbeddingProblem":
        return WeakEmbeddingProblem(self.alpha.restrict(S), self.extension)


@dataclass(eq=False)
class Obstruction:
    epsilon: CohomClass
    pulled_back: CohomClass
    witness: Optional[Cochain] = None

    @property
    def vanishes(self) -> bool:
        return self.witness is not None


def obstruction(ep: WeakEmbeddingProblem) -> Obstruction:
    eps = ep.extension.cocycle
    pulled = pullback(eps, ep.alpha)
    return Obstruction(CohomClass(eps), CohomClass(pulled), is_coboundary(pulled))


def hoechsmann_solvable(ep: WeakEmbeddingProblem) -> tuple:
    """``(solvable, obstruction)``: solvable iff alpha^*(eps) is a coboundary."""
    ob = obstruction(ep)
    return ob.vanishes, ob


def solution_from_obstruction(ep: WeakEmbeddingProblem, ob: Obstruction) -> GroupHom:
    """beta(g) = c(g) s(alpha(g)) with c = -w, where d w = alpha^*(eps)."""
    if ob.witness is None:
        raise PreconditionError("obstruction does not vanish", reason="obstruction")
    ext = ep.extension
    U = ext.f.source
    inv_coords = {tuple(v.tolist()): u for u, v in ext.coords.items()}
    G = ep.alpha.source
    images = []
    for g in range(G.order):
        c = tuple(((-ob.witness.values[g]) % ext.p).tolist())
        images.append(int(U.mul[inv_coords[c], ext.section[ep.alpha(g)]]))
    return GroupHom(G, U, images)


def u4_problem(alpha: GroupHom) -> WeakEmbeddingProblem:
    p = alpha.target.meta["p"]
    return WeakEmbeddingProblem(alpha, u4_extension(p))


def superdiagonal_alpha(G: FiniteGroup, chis: Sequence, p: int) -> GroupHom:
    """alpha = (chi_1, ..., chi_k): G -> F_p^k."""
    from .groups import elementary_abelian
    V = elementary_abelian(p, len(chis))
    vals = np.stack([_rep(c).values[:, 0] % p for c in chis], axis=1)
    images = vals @ (p ** np.arange(len(chis) - 1, -1, -1, dtype=np.int64))
    return GroupHom(G, V, images)


# -- U_4 realizations ---------------------------------------------------------


def u4_realization(chi1, chi2, chi3) -> GroupHom:
    """A surjection rho: G -> U_4(F_p) with superdiagonal (chi1, chi2, chi3).

    Raises ``PreconditionError`` naming the failing hypothesis: ``dependent``
    (classes not independent in H^1), ``cup12`` / ``cup23`` (a cup product is
    nonzero), ``not_vanishing`` (the triple product misses 0), or
    ``not_surjective``.
    """
    chis = [_rep(c) for c in (chi1, chi2, chi3)]
    M = chis[0].module
    p = M.p
    for c in chis:
        if not is_cocycle(c):
            raise HomomorphismError("inputs must be cocycles")
    stack = np.array([c.flat() for c in chis])
    if len(linalg.complement_basis(stack, coboundary_space(1, M), p)) < 3:
        raise PreconditionError("characters are linearly dependent", reason="dependent")
    for k, name in ((0, "cup12"), (1, "cup23")):
        c = cup(chis[k], chis[k + 1])
        if is_coboundary(c) is None:
            raise PreconditionError(f"chi{k + 1} u chi{k + 2} is nonzero in H^2", reason=name, witness=c)
    coset = triple_massey(*[-c for c in chis])
    ds = zero_witness(coset)
    if ds is None:
        raise PreconditionError("the triple Massey product does not contain 0", reason="not_vanishing",
                                witness=coset)
    rho_bar = ds_to_hom(ds)
    rho = lift(rho_bar, un.corner_quotient(4, p))
    if rho is None:
        raise PreconditionError("no lift to U_4 found", reason="no_lift", witness=rho_bar)
    U = rho.target
    for i, c in enumerate(chis, 1):
        if not np.array_equal(un.entry_map(U, i, i + 1)[rho.images], c.values[:, 0] % p):
            raise AssertionError("lift does not have the prescribed superdiagonal")
    if not is_surjective(rho):
        raise PreconditionError("lift is not surjective", reason="not_surjective", witness=rho)
    return rho


# -- local-global -------------------------------------------------------------


def restriction_injective_h2(G: FiniteGroup, subgroups: Sequence[Subgroup], M: GModule) -> tuple:
    """``(injective, witness)`` for H^2(G, M) -> prod H^2(S, M)."""
    if M.group is not G:
        raise DimensionMismatch("module is over a different group")
    if any(len(S) == G.order for S in subgroups):
        return True, None
    kern = restriction_kernel(2, M, subgroups)
    return (not kern), (kern[0] if kern else None)


@dataclass
class LocalGlobalVerdict:
    hypothesis_holds: bool
    kernel_witness: Optional[Cochain]
    local_solvable: list
    inferred: str                    # solvable | not_solvable | inconclusive
    direct_lift: bool
    massey_contains_zero: bool
    alpha: GroupHom = field(repr=False, default=None)
    lift: Optional[GroupHom] = field(repr=False, default=None)

    @property
    def consistent(self) -> bool:
        if self.direct_lift != self.massey_contains_zero:
            return False
        if self.inferred == "inconclusive":
            return True
        return (self.inferred == "solvable") == self.direct_lift


def local_global_vanishing(G: FiniteGroup, subgroups: Sequence[Subgroup], chi1, chi2, chi3) -> LocalGlobalVerdict:
    """Finite-scale local-global test for <chi1, chi2, chi3> containing 0.

    Takes the problem (A, U_4 -> F_p^3) along alpha = superdiagonal of the
    Dwyer homomorphism of a defining system.  If H^2(G, A) injects into the
    product over the subgroups, solvability of all restricted problems
    decides the global one; the direct lift search is always run alongside.
    """
    chis = [_rep(c) for c in (chi1, chi2, chi3)]
    coset = triple_massey(*chis)
    if coset is None:
        raise PreconditionError("triple product is not defined", reason="undefined")
    rho_bar = ds_to_hom(coset.defining_system)
    alpha = superdiagonal(rho_bar)
    ep = u4_problem(alpha)
    hyp, wit = restriction_injective_h2(G, subgroups, ep.pulled_module)
    local = []
    for S in subgroups:
        sub = ep.induced(S)
        ok, _ = hoechsmann_solvable(sub)
        if ok != (lift(sub.alpha, sub.f) is not None):
            raise AssertionError("obstruction and lift search disagree on a subgroup")
        local.append(ok)
    if hyp:
        inferred = "solvable" if all(local) else "not_solvable"
    else:
        inferred = "inconclusive"
    beta = lift(alpha, ep.f)
    return LocalGlobalVerdict(hyp, wit, local, inferred, beta is not None,
                              zero_witness(coset) is not None, alpha, beta)
