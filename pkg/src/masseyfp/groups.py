"""Finite groups as validated multiplication tables.

Elements are the indices ``0 .. order-1``.  Optional labels (tuples,
matrices) are carried for display and serialization only; isomorphism is
never inferred from them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Mapping, Optional

import numpy as np

from . import linalg
from .errors import BudgetExceeded, HomomorphismError, NotAGroupError, NotASubgroupError

ASSOCIATIVITY_CHECK_LIMIT = 512
DEFAULT_ORDER_CAP = 10**6


class FiniteGroup:
    def __init__(self, mul, *, labels=None, generators=None, name="G", meta=None,
                 matrices=None, check=True):
        mul = np.asarray(mul, dtype=np.int64)
        if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] == 0:
            raise NotAGroupError(f"multiplication table must be square and nonempty, got {mul.shape}")
        n = mul.shape[0]
        if mul.min() < 0 or mul.max() >= n:
            raise NotAGroupError("table entries must be element indices")
        self.mul = mul
        self.mul.setflags(write=False)
        self.order = n
        self.name = name
        self.meta = dict(meta or {})
        self.labels = list(labels) if labels is not None else None
        self.matrices = None if matrices is None else np.asarray(matrices, dtype=np.int64)
        self.identity = self._find_identity()
        self.inv = self._find_inverses()
        if check:
            self._check_associative()
        self.generators = tuple(int(g) for g in generators) if generators is not None else None
        if self.generators is not None and len(self.closure(self.generators)) != n:
            raise NotAGroupError(f"declared generators {self.generators} do not generate {name}")

    def _find_identity(self) -> int:
        rng = np.arange(self.order)
        for e in range(self.order):
            if np.array_equal(self.mul[e], rng) and np.array_equal(self.mul[:, e], rng):
                return e
        raise NotAGroupError("no identity element")

    def _find_inverses(self) -> np.ndarray:
        hits = self.mul == self.identity
        inv = np.full(self.order, -1, dtype=np.int64)
        for g in range(self.order):
            cand = np.flatnonzero(hits[g])
            for h in cand:
                if self.mul[h, g] == self.identity:
                    inv[g] = h
                    break
            if inv[g] < 0:
                raise NotAGroupError(f"element {g} has no inverse", witness=(g,))
        inv.setflags(write=False)
        return inv

    def _check_associative(self):
        mul = self.mul
        n = self.order
        if n <= ASSOCIATIVITY_CHECK_LIMIT:
            rows = range(n)
        else:
            rng = np.random.default_rng(0)
            rows = rng.choice(n, size=64, replace=False)
        for a in rows:
            left = mul[mul[a]]            # (a*b)*c indexed [b, c]
            right = mul[a][mul]           # a*(b*c) indexed [b, c]
            bad = np.argwhere(left != right)
            if bad.size:
                b, c = (int(x) for x in bad[0])
                raise NotAGroupError("multiplication is not associative", witness=(int(a), b, c))

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"

    def __len__(self):
        return self.order

    @cached_property
    def mul_list(self) -> list:
        return self.mul.tolist()

    def m(self, *gs) -> int:
        out = self.identity
        for g in gs:
            out = int(self.mul[out, g])
        return out

    def power(self, g: int, k: int) -> int:
        out = self.identity
        if k < 0:
            g, k = int(self.inv[g]), -k
        for _ in range(k):
            out = int(self.mul[out, g])
        return out

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != self.identity:
            x = int(self.mul[x, g])
            k += 1
        return k

    @cached_property
    def exponent(self) -> int:
        from math import lcm
        out = 1
        for g in range(self.order):
            out = lcm(out, self.element_order(g))
        return out

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def closure(self, elements) -> np.ndarray:
        """Sorted indices of the subgroup generated by ``elements``."""
        gens = np.unique(np.asarray(list(elements), dtype=np.int64))
        seen = np.zeros(self.order, dtype=bool)
        seen[self.identity] = True
        frontier = np.array([self.identity], dtype=np.int64)
        while frontier.size and gens.size:
            nxt = np.unique(self.mul[np.ix_(frontier, gens)])
            nxt = nxt[~seen[nxt]]
            seen[nxt] = True
            frontier = nxt
        return np.flatnonzero(seen)

    @cached_property
    def search_generators(self) -> tuple:
        """A small generating set, chosen greedily.

        Each step adds the element whose inclusion enlarges the generated
        subgroup the most; ties go to the smaller index.
        """
        gens: list = []
        current = self.closure([])
        while len(current) < self.order:
            inside = np.zeros(self.order, dtype=bool)
            inside[current] = True
            best, best_size = None, -1
            for g in np.flatnonzero(~inside):
                size = len(self.closure(gens + [int(g)]))
                if size > best_size:
                    best, best_size = int(g), size
                    if size == self.order:
                        break
            gens.append(best)
            current = self.closure(gens)
        return tuple(gens)

    @property
    def gens(self) -> tuple:
        return self.generators if self.generators is not None else self.search_generators

    def label(self, g: int):
        if self.labels is None:
            return g
        return self.labels[g]

    def is_subgroup(self, members) -> bool:
        mem = np.asarray(sorted(set(int(x) for x in members)), dtype=np.int64)
        if mem.size == 0 or self.identity not in set(mem.tolist()):
            return False
        mask = np.zeros(self.order, dtype=bool)
        mask[mem] = True
        return bool(mask[self.mul[np.ix_(mem, mem)]].all() and mask[self.inv[mem]].all())


def from_mul_table(table, **kw) -> FiniteGroup:
    return FiniteGroup(table, **kw)


# -- constructors -------------------------------------------------------------


@lru_cache(maxsize=None)
def trivial_group() -> FiniteGroup:
    return FiniteGroup([[0]], labels=[()], generators=[], name="1", meta={"kind": "cyclic", "n": 1})


@lru_cache(maxsize=None)
def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("cyclic group order must be positive")
    a = np.arange(n)
    gens = [1 % n] if n > 1 else []
    return FiniteGroup((a[:, None] + a[None, :]) % n, labels=list(range(n)), generators=gens,
                       name=f"Z{n}", meta={"kind": "cyclic", "n": n})


def _digits(index: int, base: int, width: int) -> tuple:
    out = []
    for _ in range(width):
        out.append(index % base)
        index //= base
    return tuple(reversed(out))


def _undigits(digits, base: int) -> int:
    out = 0
    for d in digits:
        out = out * base + int(d)
    return out


@lru_cache(maxsize=None)
def elementary_abelian(p: int, k: int) -> FiniteGroup:
    """(Z/p)^k; element index is the coordinate tuple read as a base-p numeral."""
    linalg.check_prime(p)
    if k < 0:
        raise ValueError("rank must be nonnegative")
    n = p**k
    coords = np.array([_digits(i, p, k) for i in range(n)], dtype=np.int64).reshape(n, k)
    weights = p ** np.arange(k - 1, -1, -1, dtype=np.int64)
    table = ((coords[:, None, :] + coords[None, :, :]) % p) @ weights if k else np.zeros((1, 1), dtype=np.int64)
    gens = [int(p ** (k - 1 - i)) for i in range(k)]
    return FiniteGroup(table, labels=[tuple(int(x) for x in c) for c in coords], generators=gens,
                       name=f"F{p}^{k}", meta={"kind": "elem_abelian", "p": p, "k": k})


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """G x H with element (g, h) at index g*|H| + h."""
    nG, nH = G.order, H.order
    gi = np.repeat(np.arange(nG), nH)
    hi = np.tile(np.arange(nH), nG)
    table = G.mul[np.ix_(gi, gi)] * nH + H.mul[np.ix_(hi, hi)]
    gens = [g * nH + H.identity for g in G.gens] + [G.identity * nH + h for h in H.gens]
    labels = [(G.label(int(a)), H.label(int(b))) for a, b in zip(gi, hi)]
    return FiniteGroup(table, labels=labels, generators=gens, name=f"({G.name}x{H.name})",
                       meta={"kind": "product"}, check=nG * nH <= ASSOCIATIVITY_CHECK_LIMIT)


def from_matrix_generators(p: int, d: int, gens, *, order_cap: int = DEFAULT_ORDER_CAP,
                           name: str = "GL", meta=None):
    """Close a set of invertible d x d matrices over F_p under multiplication.

    Returns ``(group, matrices)`` with ``matrices[i]`` the matrix of element i.
    Elements are numbered in breadth-first order from the identity.
    """
    linalg.check_prime(p)
    mats = [linalg.as_mat(g, p) for g in gens]
    for X in mats:
        if X.shape != (d, d):
            raise ValueError(f"generator has shape {X.shape}, expected {(d, d)}")
        linalg.inverse(X, p)
    key = lambda X: X.tobytes()
    ident = linalg.identity(d)
    elements = [ident]
    index = {key(ident): 0}
    gen_idx = []
    for X in mats:
        if key(X) not in index:
            index[key(X)] = len(elements)
            elements.append(X)
        gen_idx.append(index[key(X)])
    i = 0
    while i < len(elements):
        for X in mats:
            Y = (elements[i] @ X) % p
            if key(Y) not in index:
                if len(elements) >= order_cap:
                    raise BudgetExceeded("matrix group closure exceeds order cap", order_cap=order_cap)
                index[key(Y)] = len(elements)
                elements.append(Y)
        i += 1
    n = len(elements)
    M = np.stack(elements)
    table = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        prods = np.einsum("ij,bjk->bik", M[a], M) % p
        table[a] = [index[key(Y)] for Y in prods]
    labels = [tuple(map(tuple, X.tolist())) for X in elements]
    meta = dict(meta or {"kind": "matrix_gens", "p": p, "d": d})
    G = FiniteGroup(table, labels=labels, generators=sorted(set(gen_idx)) or [], name=name,
                    meta=meta, matrices=M, check=n <= ASSOCIATIVITY_CHECK_LIMIT)
    return G, M


def dihedral(m: int) -> FiniteGroup:
    """Symmetries of an m-gon, order 2m: index r^i s^j at i + m*j."""
    n = 2 * m
    table = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        i, j = a % m, a // m
        for b in range(n):
            k, l = b % m, b // m
            rot = (i + (k if j == 0 else -k)) % m
            table[a, b] = rot + m * ((j + l) % 2)
    labels = [f"r{a % m}" + ("s" if a >= m else "") for a in range(n)]
    return FiniteGroup(table, labels=labels, generators=[1 % m, m], name=f"D{m}",
                       meta={"kind": "table"})


def quaternion() -> FiniteGroup:
    G, _ = from_matrix_generators(3, 2, [[[0, 2], [1, 0]], [[1, 1], [1, 2]]], name="Q8")
    return G


def symmetric3() -> FiniteGroup:
    G, _ = from_matrix_generators(2, 2, [[[1, 1], [0, 1]], [[0, 1], [1, 0]]], name="S3")
    return G


def make(kind: str, *params) -> FiniteGroup:
    if kind == "cyclic":
        return cyclic(*params)
    if kind in ("elementary_abelian", "elem_abelian"):
        return elementary_abelian(*params)
    if kind in ("direct_product", "product"):
        return direct_product(*params)
    raise ValueError(f"unknown group kind {kind!r}")


def small_groups(max_order: int = 8) -> list:
    """One representative of every isomorphism type of order <= 9."""
    if max_order > 9:
        raise ValueError("catalog only covers orders up to 9")
    Z = cyclic
    catalog = [
        trivial_group(), Z(2), Z(3), Z(4), elementary_abelian(2, 2), Z(5), Z(6), symmetric3(),
        Z(7), Z(8), direct_product(Z(4), Z(2)), elementary_abelian(2, 3), dihedral(4), quaternion(),
        Z(9), elementary_abelian(3, 2),
    ]
    return [G for G in catalog if G.order <= max_order]


# -- subgroups and homomorphisms ---------------------------------------------


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    members: tuple

    def __post_init__(self):
        if not self.parent.is_subgroup(self.members):
            raise NotASubgroupError(f"{self.members} is not a subgroup of {self.parent.name}")
        object.__setattr__(self, "members", tuple(sorted(int(x) for x in self.members)))

    def __len__(self):
        return len(self.members)

    def __eq__(self, other):
        return isinstance(other, Subgroup) and other.parent is self.parent and other.members == self.members

    def __hash__(self):
        return hash((id(self.parent), self.members))

    @cached_property
    def group(self) -> FiniteGroup:
        return self.embedding.source

    @cached_property
    def embedding(self) -> "GroupHom":
        mem = np.asarray(self.members, dtype=np.int64)
        pos = {int(g): i for i, g in enumerate(mem)}
        table = np.vectorize(pos.__getitem__, otypes=[np.int64])(self.parent.mul[np.ix_(mem, mem)])
        labels = [self.parent.label(int(g)) for g in mem]
        matrices = None if self.parent.matrices is None else self.parent.matrices[mem]
        S = FiniteGroup(table, labels=labels, name=f"{self.parent.name}<{len(mem)}>",
                        matrices=matrices, check=False, meta={"kind": "subgroup"})
        return GroupHom(S, self.parent, mem, check=False)


def subgroup(G: FiniteGroup, gens) -> Subgroup:
    return Subgroup(G, tuple(G.closure(gens).tolist()))


def whole(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, tuple(range(G.order)))


def trivial_subgroup(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, (G.identity,))


def cyclic_subgroups(G: FiniteGroup) -> list:
    """Distinct subgroups <g>, ordered by (size, members)."""
    seen = {}
    for g in range(G.order):
        mem = tuple(G.closure([g]).tolist())
        seen.setdefault(mem, None)
    return [Subgroup(G, m) for m in sorted(seen, key=lambda m: (len(m), m))]


class GroupHom:
    def __init__(self, source: FiniteGroup, target: FiniteGroup, images, check=True):
        self.source = source
        self.target = target
        self.images = np.asarray(images, dtype=np.int64)
        self.images.setflags(write=False)
        if check:
            self._check()

    def _check(self):
        if self.images.shape != (self.source.order,):
            raise HomomorphismError("image table has the wrong length")
        if self.images.min() < 0 or self.images.max() >= self.target.order:
            raise HomomorphismError("image index outside the target group")
        if self.images[self.source.identity] != self.target.identity:
            raise HomomorphismError("identity is not sent to identity", witness=(self.source.identity,))
        lhs = self.images[self.source.mul]
        rhs = self.target.mul[np.ix_(self.images, self.images)]
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            g, h = (int(x) for x in bad[0])
            raise HomomorphismError("map does not respect multiplication", witness=(g, h))

    def __call__(self, g: int) -> int:
        return int(self.images[g])

    def __eq__(self, other):
        return (isinstance(other, GroupHom) and other.source is self.source
                and other.target is self.target and np.array_equal(other.images, self.images))

    def __repr__(self):
        return f"GroupHom({self.source.name} -> {self.target.name})"

    def kernel(self) -> Subgroup:
        return Subgroup(self.source, tuple(np.flatnonzero(self.images == self.target.identity).tolist()))

    def image(self) -> Subgroup:
        return Subgroup(self.target, tuple(np.unique(self.images).tolist()))

    def compose(self, first: "GroupHom") -> "GroupHom":
        """self after first."""
        if first.target is not self.source:
            raise HomomorphismError("cannot compose: groups do not match")
        return GroupHom(first.source, self.target, self.images[first.images], check=False)

    def restrict(self, S: Subgroup) -> "GroupHom":
        if S.parent is not self.source:
            raise NotASubgroupError("subgroup of a different group")
        return self.compose(S.embedding)

    def generator_images(self, gens=None) -> list:
        gens = self.source.gens if gens is None else gens
        return [int(self.images[g]) for g in gens]


def is_surjective(h: GroupHom) -> bool:
    return len(np.unique(h.images)) == h.target.order


def _extend_on_generators(G: FiniteGroup, H: FiniteGroup, gens, imgs):
    """Extend gens -> imgs multiplicatively over <gens>.

    Visits every edge g -> g*s of the Cayley graph of <gens>; returns the
    partial image table (-1 outside) or ``None`` with the first conflict.
    Checking every edge suffices: each element is a positive word in gens.
    """
    gm, hm = G.mul_list, H.mul_list
    beta = [-1] * G.order
    beta[G.identity] = H.identity
    queue = [G.identity]
    for g in queue:
        bg = beta[g]
        row_g, row_bg = gm[g], hm[bg]
        for s, t in zip(gens, imgs):
            gs = row_g[s]
            val = row_bg[t]
            b = beta[gs]
            if b < 0:
                beta[gs] = val
                queue.append(gs)
            elif b != val:
                return None, (g, s)
    return beta, None


def hom(source: FiniteGroup, target: FiniteGroup, generator_images=None, *, table=None,
        gens=None) -> GroupHom:
    """Build a validated homomorphism from generator images or a full table.

    ``generator_images`` may be a sequence aligned with ``gens`` (default:
    the source's generators) or a mapping generator -> image.
    """
    if table is not None:
        return GroupHom(source, target, table)
    if isinstance(generator_images, Mapping):
        gens = list(generator_images)
        imgs = [generator_images[g] for g in gens]
    else:
        gens = list(source.gens if gens is None else gens)
        imgs = list(generator_images)
    if len(gens) != len(imgs):
        raise HomomorphismError(f"{len(gens)} generators but {len(imgs)} images")
    beta, conflict = _extend_on_generators(source, target, [int(g) for g in gens], [int(t) for t in imgs])
    if beta is None:
        raise HomomorphismError("generator images violate a relation", witness=conflict)
    if min(beta) < 0:
        raise HomomorphismError("given elements do not generate the source group")
    return GroupHom(source, target, beta)


def search_homs(source: FiniteGroup, target: FiniteGroup, candidates=None, gens=None,
                budget: Optional[int] = None) -> Iterator[GroupHom]:
    """Enumerate homomorphisms by backtracking over generator images.

    ``candidates[i]`` lists allowed images of ``gens[i]`` (default: all of
    the target).  Each partial assignment is extended over the subgroup it
    generates and pruned on the first conflict.  Order is lexicographic in
    the candidate lists.
    """
    gens = list(source.search_generators if gens is None else gens)
    if candidates is None:
        candidates = [range(target.order)] * len(gens)
    candidates = [list(c) for c in candidates]
    visited = 0

    def rec(depth, imgs):
        nonlocal visited
        if depth == len(gens):
            beta, _ = _extend_on_generators(source, target, gens, imgs)
            yield GroupHom(source, target, beta, check=False)
            return
        for t in candidates[depth]:
            visited += 1
            if budget is not None and visited > budget:
                raise BudgetExceeded("homomorphism search exceeded its budget", budget=budget)
            trial = imgs + [t]
            beta, _ = _extend_on_generators(source, target, gens[:depth + 1], trial)
            if beta is not None:
                yield from rec(depth + 1, trial)

    yield from rec(0, [])


def all_homs(source: FiniteGroup, target: FiniteGroup) -> list:
    return list(search_homs(source, target))


def is_isomorphic_brute(G: FiniteGroup, H: FiniteGroup) -> bool:
    """Exhaustive isomorphism test, intended for orders up to 16."""
    if G.order != H.order:
        return False
    if G.order > 16:
        raise BudgetExceeded("brute-force isomorphism limited to order 16", order=G.order)
    for f in search_homs(G, H):
        if is_surjective(f):
            return True
    return False
