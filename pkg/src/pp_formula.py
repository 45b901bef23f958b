"""
pp_formula.py
-------------
Positive primitive formulas over a ringoid and their semantics.

A formula ∃ȳ (x̄ ȳ) H = 0 is stored as its relation matrix H: one row per
variable (free variables first, then bound ones), one column per equation. The
entry in row i and column j is a morphism of the acting category from the sort
of variable i to the sort of column j (coordinates in that hom group), and
column j reads Σᵢ Hᵢⱼ·vᵢ = 0 in M(column sort).

Implication is decided exactly through free realizations: ψ ≤ φ iff the
generic tuple of ψ's finitely presented module satisfies φ.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from config import ENUMERATION_LIMIT
from errors import ArityError, NotAPair, SideMismatch, SortMismatch
from groups import Element, GroupHom, Subgroup, direct_sum_groups
from modules import (
    Module,
    RelationColumn,
    SortedTuple,
    acting_category,
    finitely_presented,
    representable,
    tuple_map,
)
from ringoid import LeftIdeal, Morph, Ringoid, ideal_generated


@dataclass(frozen=True, eq=False)
class PpFormula:
    ringoid: Ringoid
    side: str
    free_sorts: tuple[str, ...]
    bound_sorts: tuple[str, ...]
    relation_sorts: tuple[str, ...]
    matrix: tuple[tuple[Element, ...], ...]

    @cached_property
    def acting(self) -> Ringoid:
        return acting_category(self.ringoid, self.side)

    @property
    def n(self) -> int:
        return len(self.free_sorts)

    @property
    def m(self) -> int:
        return len(self.bound_sorts)

    @property
    def k(self) -> int:
        return len(self.relation_sorts)

    @property
    def variable_sorts(self) -> tuple[str, ...]:
        return self.free_sorts + self.bound_sorts

    @property
    def is_quantifier_free(self) -> bool:
        return self.m == 0

    def entry(self, i: int, j: int) -> Morph:
        return Morph(self.variable_sorts[i], self.relation_sorts[j], self.matrix[i][j])

    def columns(self) -> list[RelationColumn]:
        return [
            RelationColumn(R, tuple(self.matrix[i][j] for i in range(self.n + self.m)))
            for j, R in enumerate(self.relation_sorts)
        ]

    def key(self) -> tuple:
        return (self.side, self.free_sorts, self.bound_sorts, self.relation_sorts, self.matrix)

    def __str__(self) -> str:
        from pp_dsl import format_formula

        return format_formula(self)

    @cached_property
    def free_realization(self) -> tuple[Module, SortedTuple]:
        """(C_φ, c̄): the module presented by H and the image of the free variables."""
        C, gens = finitely_presented(self.ringoid, self.side, self.variable_sorts, self.columns(), name=f"C[{self}]")
        return C, SortedTuple(self.free_sorts, gens.entries[: self.n])


def make_formula(
    R: Ringoid,
    side: str,
    free_sorts: Sequence[str],
    bound_sorts: Sequence[str],
    relation_sorts: Sequence[str],
    matrix: Sequence[Sequence[Sequence[int]]],
) -> PpFormula:
    """Check sorts and shapes, reduce entries, and build the formula."""
    A = acting_category(R, side)
    free_sorts, bound_sorts, relation_sorts = tuple(free_sorts), tuple(bound_sorts), tuple(relation_sorts)
    if not free_sorts:
        raise ArityError("a pp formula needs at least one free variable")
    variables = free_sorts + bound_sorts
    for P in variables + relation_sorts:
        if P not in R.objects:
            raise SortMismatch(f"{P} is not an object of '{R.name}'")
    if len(matrix) != len(variables) or any(len(row) != len(relation_sorts) for row in matrix):
        raise SortMismatch(f"relation matrix must be {len(variables)} × {len(relation_sorts)}")
    rows = []
    for P, row in zip(variables, matrix):
        entries = []
        for S, e in zip(relation_sorts, row):
            hom = A.hom(P, S)
            if len(e) != hom.dim:
                raise SortMismatch(f"entry {tuple(e)} is not a morphism from {P} to {S}")
            entries.append(hom.reduce(e))
        rows.append(tuple(entries))
    return PpFormula(R, side, free_sorts, bound_sorts, relation_sorts, tuple(rows))


def trivial_formula(R: Ringoid, side: str, sorts: Sequence[str]) -> PpFormula:
    """x̄ = x̄"""
    return make_formula(R, side, sorts, (), (), [[] for _ in sorts])


def zero_formula(R: Ringoid, side: str, sorts: Sequence[str]) -> PpFormula:
    """x̄ = 0"""
    A = acting_category(R, side)
    matrix = [
        [A.identities[P] if i == j else A.hom(P, S).zero for j, S in enumerate(sorts)]
        for i, P in enumerate(sorts)
    ]
    return make_formula(R, side, sorts, (), sorts, matrix)


def atom(R: Ringoid, side: str, sorts: Sequence[str], relation_sort: str, entries: Sequence[Sequence[int]]) -> PpFormula:
    """The single equation Σᵢ entries[i]·xᵢ = 0."""
    return make_formula(R, side, sorts, (), (relation_sort,), [[e] for e in entries])


def check_compatible(phi: PpFormula, psi: PpFormula):
    if phi.ringoid is not psi.ringoid and not phi.ringoid.structurally_equal(psi.ringoid):
        raise SortMismatch("formulas live over different ringoids")
    if phi.side != psi.side:
        raise SideMismatch(f"cannot combine a {phi.side} formula with a {psi.side} formula")
    if phi.free_sorts != psi.free_sorts:
        raise SortMismatch(f"free sorts differ: {phi.free_sorts} vs {psi.free_sorts}")


def _neg(A: Ringoid, P: str, S: str, e: Element) -> Element:
    return A.hom(P, S).neg(e)


# === constructors ===

def conj(phi: PpFormula, psi: PpFormula) -> PpFormula:
    check_compatible(phi, psi)
    A = phi.acting
    zeros = lambda P, sorts: tuple(A.hom(P, S).zero for S in sorts)
    rows = [phi.matrix[i] + psi.matrix[i] for i in range(phi.n)]
    rows += [row + zeros(P, psi.relation_sorts) for P, row in zip(phi.bound_sorts, phi.matrix[phi.n:])]
    rows += [zeros(P, phi.relation_sorts) + row for P, row in zip(psi.bound_sorts, psi.matrix[psi.n:])]
    return PpFormula(
        phi.ringoid, phi.side, phi.free_sorts,
        phi.bound_sorts + psi.bound_sorts,
        phi.relation_sorts + psi.relation_sorts,
        tuple(rows),
    )


def conj_all(formulas: Sequence[PpFormula]) -> PpFormula:
    result = formulas[0]
    for f in formulas[1:]:
        result = conj(result, f)
    return result


def pp_sum(phi: PpFormula, psi: PpFormula) -> PpFormula:
    """φ + ψ as ∃v̄ (φ(x̄ − v̄) ∧ ψ(v̄))."""
    check_compatible(phi, psi)
    A = phi.acting
    zeros = lambda P, sorts: tuple(A.hom(P, S).zero for S in sorts)
    n = phi.n
    rows = [phi.matrix[i] + zeros(phi.free_sorts[i], psi.relation_sorts) for i in range(n)]
    rows += [
        tuple(_neg(A, phi.free_sorts[i], S, e) for S, e in zip(phi.relation_sorts, phi.matrix[i])) + psi.matrix[i]
        for i in range(n)
    ]
    rows += [row + zeros(P, psi.relation_sorts) for P, row in zip(phi.bound_sorts, phi.matrix[n:])]
    rows += [zeros(P, phi.relation_sorts) + row for P, row in zip(psi.bound_sorts, psi.matrix[n:])]
    return PpFormula(
        phi.ringoid, phi.side, phi.free_sorts,
        phi.free_sorts + phi.bound_sorts + psi.bound_sorts,
        phi.relation_sorts + psi.relation_sorts,
        tuple(rows),
    )


def exists_project(phi: PpFormula, keep: Sequence[int]) -> PpFormula:
    """Quantify away every free variable whose index is not in `keep`."""
    keep = list(keep)
    if not keep:
        raise ArityError("exists_project must keep at least one free variable")
    if len(set(keep)) != len(keep) or any(not 0 <= i < phi.n for i in keep):
        raise SortMismatch(f"invalid free-variable indices {keep}")
    dropped = [i for i in range(phi.n) if i not in keep]
    order = keep + dropped + list(range(phi.n, phi.n + phi.m))
    return PpFormula(
        phi.ringoid, phi.side,
        tuple(phi.free_sorts[i] for i in keep),
        tuple(phi.free_sorts[i] for i in dropped) + phi.bound_sorts,
        phi.relation_sorts,
        tuple(phi.matrix[i] for i in order),
    )


def substitute(phi: PpFormula, new_sorts: Sequence[str], T: Sequence[Sequence[Sequence[int]]]) -> PpFormula:
    """
    φ(x̄) with xᵢ = Σ_l T[l][i]·z_l, as a formula in the new variables z̄.
    T[l][i] is an acting morphism from new_sorts[l] to the sort of xᵢ.
    """
    A = phi.acting
    new_sorts = tuple(new_sorts)
    if not new_sorts:
        raise ArityError("substitution needs at least one new variable")
    if len(T) != len(new_sorts) or any(len(row) != phi.n for row in T):
        raise SortMismatch(f"substitution matrix must be {len(new_sorts)} × {phi.n}")
    rows = []
    for l, Z in enumerate(new_sorts):
        row = []
        for j, S in enumerate(phi.relation_sorts):
            total = A.hom(Z, S).zero
            for i, X in enumerate(phi.free_sorts):
                t = A.hom(Z, X).reduce(T[l][i])
                if any(t) and any(phi.matrix[i][j]):
                    total = A.hom(Z, S).add(total, A.compose(phi.matrix[i][j], t, Z, X, S))
            row.append(total)
        rows.append(tuple(row))
    return PpFormula(
        phi.ringoid, phi.side, new_sorts, phi.bound_sorts, phi.relation_sorts,
        tuple(rows) + phi.matrix[phi.n:],
    )


def embed(phi: PpFormula, new_sorts: Sequence[str], positions: Sequence[int]) -> PpFormula:
    """φ read in the context new_sorts, its i-th free variable being variable positions[i]."""
    A = phi.acting
    for i, p in enumerate(positions):
        if new_sorts[p] != phi.free_sorts[i]:
            raise SortMismatch(f"variable {p} has sort {new_sorts[p]}, expected {phi.free_sorts[i]}")
    T = [
        [A.identities[Z] if positions[i] == l else A.hom(Z, phi.free_sorts[i]).zero for i in range(phi.n)]
        for l, Z in enumerate(new_sorts)
    ]
    return substitute(phi, new_sorts, T)


def rename(phi: PpFormula, order: Sequence[int]) -> PpFormula:
    """Permute free variables: the new i-th free variable is the old order[i]."""
    if sorted(order) != list(range(phi.n)):
        raise SortMismatch(f"{order} is not a permutation of the free variables")
    new_sorts = [phi.free_sorts[i] for i in order]
    positions = [order.index(i) for i in range(phi.n)]
    return embed(phi, new_sorts, positions)


def compose_pp(kind: str, *args) -> PpFormula:
    """Dispatch for the formula constructors: conj, sum, exists_project, rename."""
    if kind == "conj":
        return conj_all(args)
    if kind == "sum":
        result = args[0]
        for f in args[1:]:
            result = pp_sum(result, f)
        return result
    if kind == "exists_project":
        return exists_project(*args)
    if kind == "rename":
        return rename(*args)
    raise ValueError(f"unknown formula constructor {kind!r}")


# === semantics ===

@dataclass(frozen=True, eq=False)
class SolutionSet:
    """φ(M) as a subgroup of M(P₁) × … × M(Pₙ)."""

    module: Module
    sorts: tuple[str, ...]
    group: Subgroup

    @property
    def order(self) -> int:
        return self.group.order

    def contains(self, t: SortedTuple) -> bool:
        return self.group.contains(self.module.flatten(t))

    def tuples(self) -> list[SortedTuple]:
        return [self.module.unflatten(self.sorts, v) for v in sorted(self.group.elements())]

    def key(self) -> tuple:
        return self.group.key()

    def equals(self, other: "SolutionSet") -> bool:
        return self.key() == other.key()

    def issubset(self, other: "SolutionSet") -> bool:
        return self.group.issubset(other.group)


def _system(phi: PpFormula, M: Module) -> GroupHom:
    """(x̄, ȳ) ↦ (Σᵢ Hᵢⱼ·vᵢ)ⱼ as a map M^(variables) → ⊕ⱼ M(Rⱼ)."""
    if M.side != phi.side:
        raise SideMismatch(f"cannot evaluate a {phi.side} formula on a {M.side} module")
    if M.ringoid is not phi.ringoid and not M.ringoid.structurally_equal(phi.ringoid):
        raise SortMismatch("formula and module live over different ringoids")
    source = M.power(phi.variable_sorts)
    target = direct_sum_groups([M.fibers[S] for S in phi.relation_sorts])
    rows = []
    for i, P in enumerate(phi.variable_sorts):
        fiber = M.fibers[P]
        for c in range(fiber.dim):
            v = fiber.basis(c)
            row = []
            for j in range(phi.k):
                row.extend(M.act(phi.entry(i, j), v))
            rows.append(target.reduce(row))
    return GroupHom(source, target, tuple(rows))


def evaluate(phi: PpFormula, M: Module, method: str = "structured") -> SolutionSet:
    """
    φ(M). The structured method projects the kernel of the linear system; the
    enumerate method tries every tuple of M and exists as a cross-check; auto
    enumerates when the variable space has at most ENUMERATION_LIMIT elements.
    """
    system = _system(phi, M)
    if method == "auto":
        method = "enumerate" if system.source.order <= ENUMERATION_LIMIT else "structured"
    free_group = M.power(phi.free_sorts)
    width = free_group.dim
    if method == "enumerate":
        found = set()
        for v in system.source.elements():
            if not any(system.apply(v)):
                found.add(tuple(v[:width]))
        return SolutionSet(M, phi.free_sorts, Subgroup(free_group, tuple(sorted(found))))
    if method != "structured":
        raise ValueError(f"unknown evaluation method {method!r}")
    kernel = system.kernel()
    gens = tuple(free_group.reduce(g[:width]) for g in kernel.generators)
    return SolutionSet(M, phi.free_sorts, Subgroup(free_group, tuple(g for g in gens if any(g))))


def satisfies(phi: PpFormula, M: Module, a: SortedTuple) -> bool:
    """ā ∈ φ(M), by solving for the bound variables."""
    if a.sorts != phi.free_sorts:
        raise SortMismatch(f"tuple of sorts {a.sorts} for a formula in {phi.free_sorts}")
    system = _system(phi, M)
    flat = M.flatten(a)
    width = len(flat)
    lhs = system.target.zero
    for coeff, row in zip(flat, system.matrix[:width]):
        if coeff:
            lhs = system.target.add(lhs, system.target.scale(coeff, row))
    if phi.m == 0:
        return not any(lhs)
    bound = GroupHom(M.power(phi.bound_sorts), system.target, system.matrix[width:])
    return bound.preimage_of(system.target.neg(lhs)) is not None


@dataclass
class Implication:
    holds: bool
    counterexample: tuple[Module, SortedTuple] | None = None

    def __bool__(self) -> bool:
        return self.holds


def implies(psi: PpFormula, phi: PpFormula) -> Implication:
    """ψ ≤ φ; on failure the free realization of ψ is the counterexample."""
    check_compatible(psi, phi)
    C, c = psi.free_realization
    if satisfies(phi, C, c):
        return Implication(True)
    return Implication(False, (C, c))


def equivalent(phi: PpFormula, psi: PpFormula) -> bool:
    return bool(implies(phi, psi)) and bool(implies(psi, phi))


def principal_type(a: SortedTuple, M: Module) -> PpFormula:
    """
    A formula generating the pp-type of ā in M: ∃ȳ (x̄ = ȳ·W ∧ ȳ satisfies the
    relations of M), for the presentation of M on its canonical generators.
    """
    if not a.sorts:
        raise ArityError("principal_type needs a nonempty tuple")
    M.check_tuple(a)
    pres = M.presentation
    gens = pres.generators
    A = M.acting
    pi = tuple_map(M, gens)

    matrix_rows = []
    relation_sorts = list(a.sorts)
    weights = []
    for P, e in zip(a.sorts, a.entries):
        w = pi.components[P].preimage_of(e)
        blocks, at = [], 0
        for S in gens.sorts:
            d = A.hom(S, P).dim
            blocks.append(tuple(w[at:at + d]))
            at += d
        weights.append(blocks)

    n = len(a.sorts)
    for i, P in enumerate(a.sorts):
        row = [A.identities[P] if j == i else A.hom(P, a.sorts[j]).zero for j in range(n)]
        row += [A.hom(P, col.sort).zero for col in pres.relations]
        matrix_rows.append(row)
    for k, S in enumerate(gens.sorts):
        row = [A.hom(S, a.sorts[i]).neg(weights[i][k]) for i in range(n)]
        row += [col.entries[k] for col in pres.relations]
        matrix_rows.append(row)
    relation_sorts += [col.sort for col in pres.relations]
    return make_formula(M.ringoid, M.side, a.sorts, gens.sorts, relation_sorts, matrix_rows)


def pp_ideal(phi: PpFormula) -> LeftIdeal:
    """
    The ideal φ(R): part(Q) = φ((−,Q)) inside hom(P, Q) for a right formula in
    one variable of sort P. A left formula gives the ideal of the opposite ringoid.
    """
    if phi.n != 1:
        raise ArityError(f"pp_ideal needs exactly one free variable, got {phi.n}")
    P = phi.free_sorts[0]
    A = phi.acting.opposite
    parts = {}
    for Q in phi.ringoid.objects:
        parts[Q] = evaluate(phi, representable(phi.ringoid, Q, phi.side)).group
    gens: list[Morph] = []
    current = ideal_generated(A, P, [])
    for Q in phi.ringoid.objects:
        for g in parts[Q].generators:
            m = Morph(P, Q, g)
            if any(g) and not current.contains(m):
                gens.append(m)
                current = ideal_generated(A, P, gens)
    return current


def invariant(phi: PpFormula, psi: PpFormula, M: Module) -> int:
    """|φ(M) / ψ(M)| for a pair ψ ≤ φ."""
    verdict = implies(psi, phi)
    if not verdict:
        raise NotAPair(verdict.counterexample)
    return evaluate(phi, M).order // evaluate(psi, M).order


# === the sampled family ===

def _columns(A: Ringoid, sorts: Sequence[str], S: str) -> list[tuple[Element, ...]]:
    """Every nonzero column of sort S for variables of the given sorts."""
    spaces = [list(A.hom(P, S).elements()) for P in sorts]
    return [col for col in itertools.product(*spaces) if any(any(e) for e in col)]


def enumerate_formulas(
    R: Ringoid,
    side: str,
    free_sorts: Sequence[str],
    max_bound: int,
    max_cols: int,
) -> Iterable[PpFormula]:
    """
    Formulas with the given free sorts, at most max_bound bound variables and
    max_cols columns: columns are distinct, nonzero and sorted, and every bound
    variable occurs.
    """
    A = acting_category(R, side)
    objects = R.objects
    for m in range(max_bound + 1):
        for bound in itertools.combinations_with_replacement(objects, m):
            variables = tuple(free_sorts) + bound
            candidates = [(S, col) for S in objects for col in _columns(A, variables, S)]
            for k in range(max_cols + 1):
                for chosen in itertools.combinations(candidates, k):
                    if any(not any(any(col[i]) for _, col in chosen) for i in range(len(free_sorts), len(variables))):
                        continue
                    matrix = tuple(tuple(col[i] for _, col in chosen) for i in range(len(variables)))
                    yield PpFormula(R, side, tuple(free_sorts), bound, tuple(S for S, _ in chosen), matrix)


def reference_modules(R: Ringoid, side: str) -> list[Module]:
    return [representable(R, P, side) for P in R.objects]


def sampled_formulas(
    R: Ringoid,
    side: str,
    max_free: int = 1,
    max_bound: int = 1,
    max_cols: int = 2,
    against: Sequence[Module] | None = None,
) -> list[PpFormula]:
    """
    The sampled family up to equivalence: each class is represented by its first
    formula in enumeration order. Formulas are bucketed by their values on the
    reference modules and compared with `equivalent` inside a bucket.
    """
    against = list(against) if against is not None else reference_modules(R, side)
    family: list[PpFormula] = []
    for n in range(1, max_free + 1):
        for free in itertools.product(R.objects, repeat=n):
            buckets: dict[tuple, list[PpFormula]] = {}
            for phi in enumerate_formulas(R, side, free, max_bound, max_cols):
                fingerprint = tuple(evaluate(phi, M).key() for M in against)
                bucket = buckets.setdefault(fingerprint, [])
                if any(equivalent(phi, rep) for rep in bucket):
                    continue
                bucket.append(phi)
                family.append(phi)
    return family
