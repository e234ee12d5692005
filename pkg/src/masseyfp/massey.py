"""Defining systems and Massey products in C*(G, F_p).

A defining system for <a_1, ..., a_n> is a triangle of 1-cochains a_ij,
1 <= i < j <= n+1 with (i, j) != (1, n+1), such that a_{i,i+1} represents a_i
and  d a_ij = sum_{i<l<j} a_il u a_lj.  Its value is the class of
sum_{k=2..n} a_1k u a_{k,n+1}.

For n = 3 the product is computed by linear algebra as an explicit coset
particular + span(chi_1 u H^1 + H^1 u chi_3).  For larger n only verdicts
are exposed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import numpy as np

from . import linalg
from .cohomology import (Cochain, CohomClass, GModule, coboundary, coboundary_space, class_key, cup, is_cocycle,
                         h1_basis, is_coboundary, solve_one_cochains)
from .errors import BudgetExceeded, DimensionMismatch, InvalidDefiningSystem, NotACocycleError

DEFAULT_SYSTEM_BUDGET = 2**20


def positions(n: int) -> list:
    """Entries of a defining system, ordered by width j - i then by i."""
    pos = [(i, j) for i in range(1, n + 2) for j in range(i + 1, n + 2) if (i, j) != (1, n + 1)]
    return sorted(pos, key=lambda ij: (ij[1] - ij[0], ij[0]))


def _rep(x) -> Cochain:
    return x.representative if isinstance(x, CohomClass) else x


@dataclass(eq=False)
class DefiningSystem:
    n: int
    entries: dict

    def __post_init__(self):
        missing = set(positions(self.n)) - set(self.entries)
        if missing:
            raise InvalidDefiningSystem(f"missing entries {sorted(missing)}")

    def __getitem__(self, ij) -> Cochain:
        return self.entries[tuple(ij)]

    @property
    def module(self) -> GModule:
        return self.entries[1, 2].module

    @property
    def group(self):
        return self.module.group

    def __eq__(self, other):
        return (isinstance(other, DefiningSystem) and other.n == self.n
                and all(self[ij] == other[ij] for ij in positions(self.n)))

    def replace(self, changes: dict) -> "DefiningSystem":
        entries = dict(self.entries)
        entries.update({tuple(k): v for k, v in changes.items()})
        return DefiningSystem(self.n, entries)


@dataclass(frozen=True)
class Violation:
    condition: int
    position: tuple
    detail: str


def _first_violation(ds: DefiningSystem, inputs=None) -> Optional[Violation]:
    n = ds.n
    for i in range(1, n + 1):
        a = ds[i, i + 1]
        if not is_cocycle(a):
            return Violation(1, (i, i + 1), "superdiagonal entry is not a cocycle")
        if inputs is not None:
            diff = a - _rep(inputs[i - 1])
            if not diff.is_zero() and is_coboundary(diff) is None:
                return Violation(1, (i, i + 1), f"entry does not represent input {i}")
    for (i, j) in positions(n):
        if j == i + 1:
            continue
        rhs = Cochain.zero(ds.module, 2)
        for l in range(i + 1, j):
            rhs = rhs + cup(ds[i, l], ds[l, j])
        if coboundary(ds[i, j]) != rhs:
            return Violation(2, (i, j), "d a_ij differs from sum of a_il u a_lj")
    return None


def validate(ds: DefiningSystem, inputs: Sequence) -> tuple:
    """``(ok, violation)`` for both defining-system conditions."""
    if len(inputs) != ds.n:
        raise DimensionMismatch(f"defining system has n = {ds.n} but {len(inputs)} inputs were given")
    v = _first_violation(ds, inputs)
    return v is None, v


def value_cochain(ds: DefiningSystem) -> Cochain:
    n = ds.n
    out = Cochain.zero(ds.module, 2)
    for k in range(2, n + 1):
        out = out + cup(ds[1, k], ds[k, n + 1])
    return out


def value(ds: DefiningSystem) -> CohomClass:
    v = _first_violation(ds)
    if v is not None:
        raise InvalidDefiningSystem(f"condition ({v.condition}) fails at {v.position}: {v.detail}")
    z = value_cochain(ds)
    if not is_cocycle(z):
        raise AssertionError("value of a defining system is not a cocycle")
    return CohomClass(z, True)


# -- triple products ----------------------------------------------------------


@dataclass(eq=False)
class MasseyValueCoset:
    """<chi1, chi2, chi3> = particular + span(indeterminacy_basis).

    The spanning classes are chi1 u h and h u chi3 for h running over a basis
    of H^1; they need not be independent.
    """

    particular: CohomClass
    indeterminacy_basis: list
    defining_system: DefiningSystem
    h1: list = field(repr=False, default_factory=list)

    @property
    def module(self) -> GModule:
        return self.particular.module


def _check_cocycles(chis):
    for k, c in enumerate(chis, 1):
        if c.degree != 1:
            raise DimensionMismatch(f"input {k} is not a 1-cochain")
        if not is_cocycle(c):
            raise NotACocycleError(f"input {k} is not a cocycle")
    M = chis[0].module
    if any(c.module is not M for c in chis):
        raise DimensionMismatch("inputs live in different modules")


def undefined_witness(chi1, chi2, chi3) -> Optional[dict]:
    """The first nonvanishing cup product among chi1 u chi2, chi2 u chi3, if any."""
    chis = [_rep(c) for c in (chi1, chi2, chi3)]
    _check_cocycles(chis)
    for k in (0, 1):
        c = cup(chis[k], chis[k + 1])
        if is_coboundary(c) is None:
            return {"pair": (k + 1, k + 2), "cup": c}
    return None


def triple_massey(chi1, chi2, chi3) -> Optional[MasseyValueCoset]:
    """The triple product as a coset in H^2, or ``None`` when it is undefined."""
    chis = [_rep(c) for c in (chi1, chi2, chi3)]
    _check_cocycles(chis)
    a13 = is_coboundary(cup(chis[0], chis[1]))
    if a13 is None:
        return None
    a24 = is_coboundary(cup(chis[1], chis[2]))
    if a24 is None:
        return None
    ds = DefiningSystem(3, {(1, 2): chis[0], (2, 3): chis[1], (3, 4): chis[2],
                            (1, 3): a13, (2, 4): a24})
    h1 = h1_basis(chis[0].module)
    indet = [CohomClass(cup(chis[0], h)) for h in h1] + [CohomClass(cup(h, chis[2])) for h in h1]
    return MasseyValueCoset(CohomClass(value_cochain(ds)), indet, ds, h1)


def zero_witness(coset: MasseyValueCoset) -> Optional[DefiningSystem]:
    """A defining system whose value is the zero class, or ``None``.

    Solves  d a = value + sum_j y_j t_j  over a in C^1 and scalars y_j, where
    t_j are the spanning indeterminacy classes; a solution shifts a_24 by
    sum y_j h_j (for t_j = chi1 u h_j) and a_13 by sum y_j h_j (for h_j u chi3).
    """
    M = coset.module
    extras = [t.representative for t in coset.indeterminacy_basis]
    sol = solve_one_cochains(M, coset.particular.representative, extras)
    if not sol.consistent:
        return None
    y = sol.coefficients(sol.solution.particular)
    k = len(coset.h1)
    ds = coset.defining_system
    shift24 = Cochain.zero(M, 1)
    shift13 = Cochain.zero(M, 1)
    for j, h in enumerate(coset.h1):
        shift24 = shift24 + h * int(y[j])
        shift13 = shift13 + h * int(y[k + j])
    return ds.replace({(2, 4): ds[2, 4] + shift24, (1, 3): ds[1, 3] + shift13})


def contains_zero(coset: MasseyValueCoset) -> bool:
    return zero_witness(coset) is not None


def indeterminacy_dim(coset: MasseyValueCoset) -> int:
    """dim of span(chi1 u H^1 + H^1 u chi3) inside H^2.

    The relations sum y_j t_j in B^2 are the y-parts of solutions of
    d a = sum y_j t_j; the dimension is the number of spanning classes minus
    the rank of those relations.
    """
    M = coset.module
    extras = [t.representative for t in coset.indeterminacy_basis]
    if not extras:
        return 0
    sol = solve_one_cochains(M, Cochain.zero(M, 2), extras)
    rel = [sol.coefficients(k) for k in sol.solution.kernel_basis]
    return len(extras) - (linalg.rank(np.array(rel), M.p) if rel else 0)


def coset_class_keys(coset: MasseyValueCoset, budget: int = DEFAULT_SYSTEM_BUDGET) -> set:
    """Every class of the coset, as class-coordinate keys (small groups only)."""
    p = coset.module.p
    part = coset.particular.representative.flat()
    span = [t.representative.flat() for t in coset.indeterminacy_basis]
    basis = linalg.row_basis(np.array(span), p) if span else np.zeros((0, part.size), dtype=np.int64)
    sol = linalg.AffineSolutionSet(p, part.size, part, basis)
    M = coset.module
    return {class_key(Cochain.from_flat(M, 2, v)) for v in linalg.iter_solutions(sol, budget)}


# -- n-fold products ----------------------------------------------------------


def enumerate_defining_systems(inputs: Sequence, budget: int = DEFAULT_SYSTEM_BUDGET) -> Iterator[DefiningSystem]:
    """Every defining system for <inputs>, in a fixed order."""
    chis = [_rep(c) for c in inputs]
    _check_cocycles(chis)
    n = len(chis)
    M = chis[0].module
    p = M.p
    order = positions(n)
    B1 = coboundary_space(1, M)
    reps = []
    for c in chis:
        sol = linalg.AffineSolutionSet(p, c.flat().size, c.flat(), B1)
        reps.append([Cochain.from_flat(M, 1, v) for v in linalg.iter_solutions(sol, budget)])
    count = 0

    def rec(k, entries):
        nonlocal count
        if k == len(order):
            count += 1
            if count > budget:
                raise BudgetExceeded("too many defining systems", budget=budget)
            yield DefiningSystem(n, dict(entries))
            return
        i, j = order[k]
        if j == i + 1:
            options = reps[i - 1]
        else:
            rhs = Cochain.zero(M, 2)
            for l in range(i + 1, j):
                rhs = rhs + cup(entries[i, l], entries[l, j])
            sol = solve_one_cochains(M, rhs)
            if not sol.consistent:
                return
            options = (sol.cochain(params) for params in linalg.iter_solutions(sol.solution, budget))
        for a in options:
            entries[i, j] = a
            yield from rec(k + 1, entries)
        entries.pop((i, j), None)

    yield from rec(0, {})


@dataclass
class MasseyVerdict:
    verdict: str                      # undefined | contains_zero | defined_not_vanishing
    strategy: str
    n: int
    witness_kind: Optional[str] = None
    witness: object = None

    @property
    def defined(self) -> bool:
        return self.verdict != "undefined"

    @property
    def contains_zero(self) -> Optional[bool]:
        return None if self.verdict == "undefined" else self.verdict == "contains_zero"


def nfold_vanishes(inputs: Sequence, strategy: str = "auto",
                   budget: int = DEFAULT_SYSTEM_BUDGET) -> MasseyVerdict:
    """Decide whether <inputs> is defined and contains zero.

    Strategies: ``enumerate`` walks every defining system; ``dwyer`` searches
    homomorphisms into the corner quotient of U_{n+1} and their lifts;
    ``linear`` (n = 3 only) uses the coset description.  ``auto`` picks
    ``linear`` for n = 3 and ``enumerate`` otherwise.
    """
    chis = [_rep(c) for c in inputs]
    n = len(chis)
    if n < 2:
        raise DimensionMismatch("need at least two inputs")
    if strategy == "auto":
        strategy = "linear" if n == 3 else "enumerate"
    if strategy == "linear":
        if n != 3:
            raise ValueError("the linear strategy handles triple products only")
        coset = triple_massey(*chis)
        if coset is None:
            return MasseyVerdict("undefined", strategy, n, "cup", undefined_witness(*chis))
        ds = zero_witness(coset)
        if ds is not None:
            return MasseyVerdict("contains_zero", strategy, n, "defining_system", ds)
        return MasseyVerdict("defined_not_vanishing", strategy, n, "coset", coset)
    if strategy == "enumerate":
        first = None
        for ds in enumerate_defining_systems(chis, budget):
            if first is None:
                first = ds
            if is_coboundary(value_cochain(ds)) is not None:
                return MasseyVerdict("contains_zero", strategy, n, "defining_system", ds)
        if first is None:
            wit = undefined_witness(*chis) if n == 3 else None
            return MasseyVerdict("undefined", strategy, n, "cup" if wit else None, wit)
        return MasseyVerdict("defined_not_vanishing", strategy, n, "defining_system", first)
    if strategy == "dwyer":
        from .embed import dwyer_search
        return dwyer_search(chis, budget)
    raise ValueError(f"unknown strategy {strategy!r}")
