"""
modules.py
----------
Finite modules over a ringoid, module maps, submodules and quotients,
representables, finite presentations, direct sums and Hom groups.

Left and right modules share one implementation. A module is stored as a
covariant functor on its *acting category*: the ringoid itself for left modules
and its opposite for right modules. A right action of r: P → Q in the ringoid is
therefore the action of the acting morphism Q → P with the same coordinates.

actions[(P, Q)][i] is the matrix of the i-th coordinate generator of
acting(P, Q), rows being the images of the coordinate generators of fiber(P).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import gcd, prod
from typing import Iterable, Mapping, Sequence

from config import MAX_MODULE_ORDER, SIDES
from errors import (
    DocumentError,
    FunctorialityViolation,
    NaturalityViolation,
    SideMismatch,
    SortMismatch,
)
from groups import Element, FinAbGroup, GroupHom, Subgroup, direct_sum_groups
from persistence import log_action
from ringoid import Morph, Ringoid

Matrix = tuple[Element, ...]


def acting_category(R: Ringoid, side: str) -> Ringoid:
    if side not in SIDES:
        raise SideMismatch(f"side must be one of {SIDES}, got {side!r}")
    return R if side == "left" else R.opposite


def other_side(side: str) -> str:
    return "right" if side == "left" else "left"


@dataclass(frozen=True)
class SortedTuple:
    sorts: tuple[str, ...]
    entries: tuple[Element, ...]

    def __len__(self) -> int:
        return len(self.sorts)

    def __str__(self) -> str:
        return "(" + ", ".join(f"{','.join(map(str, e)) or '0'}:{s}" for s, e in zip(self.sorts, self.entries)) + ")"


@dataclass(frozen=True)
class RelationColumn:
    """One relation Σᵢ hᵢ·gᵢ = 0 of sort `sort`; entries[i] lies in acting(Pᵢ, sort)."""

    sort: str
    entries: tuple[Element, ...]


@dataclass(frozen=True, eq=False)
class Module:
    ringoid: Ringoid
    side: str
    fibers: Mapping[str, FinAbGroup]
    actions: Mapping[tuple[str, str], tuple[Matrix, ...]]
    name: str = ""

    @cached_property
    def acting(self) -> Ringoid:
        return acting_category(self.ringoid, self.side)

    @property
    def objects(self) -> tuple[str, ...]:
        return self.ringoid.objects

    def fiber(self, P: str) -> FinAbGroup:
        return self.fibers[P]

    @property
    def order(self) -> int:
        return prod(self.fibers[P].order for P in self.objects)

    def is_zero(self) -> bool:
        return self.order == 1

    def __str__(self) -> str:
        return self.name or f"{self.side} module of order {self.order}"

    # --- actions ------------------------------------------------------------

    @cached_property
    def _generator_homs(self) -> dict[tuple[str, str], list[GroupHom]]:
        return {
            (P, Q): [GroupHom(self.fibers[P], self.fibers[Q], m) for m in mats]
            for (P, Q), mats in self.actions.items()
        }

    def action_hom(self, t: Morph) -> GroupHom:
        """The group map fiber(dom t) → fiber(cod t) of an acting morphism t."""
        source, target = self.fibers[t.dom], self.fibers[t.cod]
        rows = []
        for i in range(source.dim):
            rows.append(self.act(t, source.basis(i)))
        return GroupHom(source, target, tuple(rows))

    def act(self, t: Morph, v: Sequence[int]) -> Element:
        target = self.fibers[t.cod]
        out = [0] * target.dim
        for c, h in zip(t.elem, self._generator_homs[(t.dom, t.cod)]):
            if c:
                image = h.apply(v)
                for k, x in enumerate(image):
                    out[k] += c * x
        return target.reduce(out)

    def acting_morph(self, r: Morph) -> Morph:
        """The acting-category morphism for a ringoid morphism r."""
        return r if self.side == "left" else Morph(r.cod, r.dom, r.elem)

    def act_ring(self, r: Morph, v: Sequence[int]) -> Element:
        """m·r for right modules, r·m for left modules."""
        return self.act(self.acting_morph(r), v)

    # --- tuples -------------------------------------------------------------

    def power(self, sorts: Sequence[str]) -> FinAbGroup:
        return direct_sum_groups([self.fibers[P] for P in sorts])

    def flatten(self, t: SortedTuple) -> Element:
        return tuple(x for e in t.entries for x in e)

    def unflatten(self, sorts: Sequence[str], v: Sequence[int]) -> SortedTuple:
        entries, at = [], 0
        for P in sorts:
            d = self.fibers[P].dim
            entries.append(tuple(v[at:at + d]))
            at += d
        return SortedTuple(tuple(sorts), tuple(entries))

    def elements(self, P: str):
        return self.fibers[P].elements()

    def check_tuple(self, t: SortedTuple):
        for P, e in zip(t.sorts, t.entries):
            if P not in self.fibers or not self.fibers[P].is_element(e):
                raise SortMismatch(f"{e} is not an element of sort {P} in {self}")

    # --- derived structure --------------------------------------------------

    @cached_property
    def generators(self) -> SortedTuple:
        return generating_tuple(self)

    @cached_property
    def presentation(self) -> "Presentation":
        return present(self)


def _validate(M: Module):
    A = M.acting
    for P in M.objects:
        if P not in M.fibers:
            raise DocumentError(f"module has no fiber at {P}")
    if M.order > MAX_MODULE_ORDER:
        raise DocumentError(f"module order {M.order} exceeds the bound {MAX_MODULE_ORDER}")
    for P, Q in itertools.product(M.objects, repeat=2):
        mats = M.actions.get((P, Q))
        hom = A.hom(P, Q)
        if mats is None or len(mats) != hom.dim:
            raise DocumentError(f"expected {hom.dim} action matrices for ({P}, {Q})")
        for i, m in enumerate(mats):
            if len(m) != M.fibers[P].dim or any(len(row) != M.fibers[Q].dim for row in m):
                raise DocumentError(f"action matrix {i} for ({P}, {Q}) has the wrong shape")
            h = M._generator_homs[(P, Q)][i]
            t = Morph(P, Q, hom.basis(i))
            if not h.is_well_defined():
                raise FunctorialityViolation((t,), "action is not a group homomorphism")
            if any(x for row in m for x in M.fibers[Q].scale(hom.moduli[i], row)):
                raise FunctorialityViolation((t,), "additivity fails: generator order does not annihilate its action")

    for P in M.objects:
        fiber = M.fibers[P]
        one = A.identity(P)
        for i in range(fiber.dim):
            v = fiber.basis(i)
            if M.act(one, v) != v:
                raise FunctorialityViolation((one, v), "identity does not act as the identity")

    for P, Q, S in itertools.product(M.objects, repeat=3):
        for s in A.basis(Q, S):
            for t in A.basis(P, Q):
                st = A.compose_morph(s, t)
                for i in range(M.fibers[P].dim):
                    v = M.fibers[P].basis(i)
                    if M.act(st, v) != M.act(s, M.act(t, v)):
                        raise FunctorialityViolation((s, t, v), "action does not respect composition")


def build_module(
    R: Ringoid,
    side: str,
    fibers: Mapping[str, FinAbGroup],
    actions: Mapping[tuple[str, str], Sequence[Sequence[Sequence[int]]]],
    name: str = "",
) -> Module:
    """Validate fibers and action tables, raising FunctorialityViolation with a witness."""
    acting_category(R, side)
    frozen = {}
    for P, Q in itertools.product(R.objects, repeat=2):
        mats = actions.get((P, Q), [])
        if Q not in fibers:
            raise DocumentError(f"module has no fiber at {Q}")
        frozen[(P, Q)] = tuple(tuple(fibers[Q].reduce(row) for row in m) for m in mats)
    M = Module(R, side, dict(fibers), frozen, name)
    _validate(M)
    log_action(f"Module '{name or M}' over '{R.name}' validated ({side}, order {M.order})")
    return M


def zero_module(R: Ringoid, side: str) -> Module:
    A = acting_category(R, side)
    fibers = {P: FinAbGroup(()) for P in R.objects}
    actions = {(P, Q): tuple(() for _ in range(A.hom(P, Q).dim)) for P in R.objects for Q in R.objects}
    return Module(R, side, fibers, actions, "0")


def representable(R: Ringoid, P: str, side: str) -> Module:
    """(P, −) for left modules, (−, P) for right modules."""
    A = acting_category(R, side)
    if P not in R.objects:
        raise SortMismatch(f"{P} is not an object of '{R.name}'")
    fibers = {X: A.hom(P, X) for X in R.objects}
    actions = {}
    for X, Y in itertools.product(R.objects, repeat=2):
        table = A.table[(P, X, Y)]
        actions[(X, Y)] = tuple(tuple(table[a][b] for b in range(A.hom(P, X).dim)) for a in range(A.hom(X, Y).dim))
    name = f"({P},-)" if side == "left" else f"(-,{P})"
    return Module(R, side, fibers, actions, name)


def regular_module(R: Ringoid, side: str) -> Module:
    P = R.require_ring("regular_module")
    M = representable(R, P, side)
    return Module(R, side, M.fibers, M.actions, "R")


def _same_category(M: Module, N: Module):
    if M.ringoid is not N.ringoid and not M.ringoid.structurally_equal(N.ringoid):
        raise SortMismatch(f"modules live over different ringoids ('{M.ringoid.name}', '{N.ringoid.name}')")
    if M.side != N.side:
        raise SideMismatch(f"cannot combine a {M.side} module with a {N.side} module")


def direct_sum(M: Module, N: Module, name: str = "") -> Module:
    _same_category(M, N)
    fibers = {P: M.fibers[P].direct_sum(N.fibers[P]) for P in M.objects}
    actions = {}
    for (P, Q), mats in M.actions.items():
        nQ = N.fibers[Q].dim
        mQ = M.fibers[Q].dim
        blocks = []
        for m, n in zip(mats, N.actions[(P, Q)]):
            rows = [tuple(row) + (0,) * nQ for row in m] + [(0,) * mQ + tuple(row) for row in n]
            blocks.append(tuple(rows))
        actions[(P, Q)] = tuple(blocks)
    return Module(M.ringoid, M.side, fibers, actions, name or f"{M}+{N}")


def direct_sum_all(modules: Sequence[Module], name: str = "") -> Module:
    total = modules[0]
    for M in modules[1:]:
        total = direct_sum(total, M)
    if name:
        total = Module(total.ringoid, total.side, total.fibers, total.actions, name)
    return total


# === module maps ===

@dataclass(frozen=True, eq=False)
class ModuleMap:
    source: Module
    target: Module
    components: Mapping[str, GroupHom]

    def apply(self, P: str, v: Sequence[int]) -> Element:
        return self.components[P].apply(v)

    def apply_tuple(self, t: SortedTuple) -> SortedTuple:
        return SortedTuple(t.sorts, tuple(self.apply(P, e) for P, e in zip(t.sorts, t.entries)))

    def key(self) -> tuple:
        return tuple(self.components[P].matrix for P in self.source.objects)

    def then(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, other.target, {P: self.components[P].then(other.components[P]) for P in self.source.objects})

    def kernel(self) -> "Submodule":
        return Submodule(self.source, {P: h.kernel() for P, h in self.components.items()})

    def image(self) -> "Submodule":
        return Submodule(self.target, {P: h.image() for P, h in self.components.items()})

    def is_injective(self) -> bool:
        return all(h.is_injective() for h in self.components.values())

    def is_surjective(self) -> bool:
        return all(h.is_surjective() for h in self.components.values())

    def is_zero(self) -> bool:
        return all(not any(x for row in h.matrix for x in row) for h in self.components.values())

    def check_natural(self):
        A = self.source.acting
        for P, Q in itertools.product(self.source.objects, repeat=2):
            for t in A.basis(P, Q):
                for i in range(self.source.fibers[P].dim):
                    v = self.source.fibers[P].basis(i)
                    if self.apply(Q, self.source.act(t, v)) != self.target.act(t, self.apply(P, v)):
                        raise NaturalityViolation((t, P, v))


def build_module_map(source: Module, target: Module, components: Mapping[str, Sequence[Sequence[int]]]) -> ModuleMap:
    _same_category(source, target)
    homs = {}
    for P in source.objects:
        h = GroupHom(source.fibers[P], target.fibers[P], tuple(target.fibers[P].reduce(r) for r in components[P]))
        if len(h.matrix) != source.fibers[P].dim or not h.is_well_defined():
            raise NaturalityViolation((P,))
        homs[P] = h
    f = ModuleMap(source, target, homs)
    f.check_natural()
    return f


def identity_map(M: Module) -> ModuleMap:
    return ModuleMap(M, M, {P: GroupHom.identity(M.fibers[P]) for P in M.objects})


def zero_map(M: Module, N: Module) -> ModuleMap:
    return ModuleMap(M, N, {P: GroupHom.zero(M.fibers[P], N.fibers[P]) for P in M.objects})


# === submodules and quotients ===

@dataclass(frozen=True, eq=False)
class Submodule:
    module: Module
    parts: Mapping[str, Subgroup]

    def key(self) -> tuple:
        return tuple(self.parts[P].key() for P in self.module.objects)

    @property
    def order(self) -> int:
        return prod(self.parts[P].order for P in self.module.objects)

    def contains(self, P: str, v: Sequence[int]) -> bool:
        return self.parts[P].contains(v)

    def contains_tuple(self, t: SortedTuple) -> bool:
        return all(self.contains(P, e) for P, e in zip(t.sorts, t.entries))

    def plus(self, other: "Submodule") -> "Submodule":
        return Submodule(self.module, {P: self.parts[P].plus(other.parts[P]) for P in self.module.objects})

    def equals(self, other: "Submodule") -> bool:
        return self.key() == other.key()

    def is_whole(self) -> bool:
        return self.order == self.module.order

    @cached_property
    def embedded(self) -> tuple[Module, ModuleMap]:
        """The submodule as a module in its own right, with its inclusion."""
        M = self.module
        A = M.acting
        pres = {P: self.parts[P].presentation for P in M.objects}
        fibers = {P: pres[P].group for P in M.objects}
        actions = {}
        for P, Q in itertools.product(M.objects, repeat=2):
            mats = []
            for t in A.basis(P, Q):
                rows = tuple(pres[Q].coords(M.act(t, pres[P].embed(fibers[P].basis(i)))) for i in range(fibers[P].dim))
                mats.append(rows)
            actions[(P, Q)] = tuple(mats)
        S = Module(M.ringoid, M.side, fibers, actions, f"sub({M})")
        inclusion = ModuleMap(S, M, {P: pres[P].embedding_hom() for P in M.objects})
        return S, inclusion


def submodule_generated(M: Module, elements: Iterable[tuple[str, Sequence[int]]]) -> Submodule:
    """The smallest submodule containing the given (sort, element) pairs."""
    spans: dict[str, list[Element]] = {P: [] for P in M.objects}
    A = M.acting
    for S, v in elements:
        if not any(v):
            continue
        for X in M.objects:
            for t in A.basis(S, X):
                w = M.act(t, v)
                if any(w):
                    spans[X].append(w)
    return Submodule(M, {P: Subgroup(M.fibers[P], tuple(spans[P])) for P in M.objects})


def whole_submodule(M: Module) -> Submodule:
    return Submodule(M, {P: M.fibers[P].whole() for P in M.objects})


def quotient(M: Module, sub: Submodule, name: str = "") -> tuple[Module, ModuleMap]:
    """M / sub together with the projection."""
    A = M.acting
    maps = {P: M.fibers[P].quotient(sub.parts[P]) for P in M.objects}
    fibers = {P: q.group for P, q in maps.items()}
    actions = {}
    for P, Q in itertools.product(M.objects, repeat=2):
        mats = []
        for t in A.basis(P, Q):
            rows = tuple(maps[Q].project(M.act(t, maps[P].lift(fibers[P].basis(i)))) for i in range(fibers[P].dim))
            mats.append(rows)
        actions[(P, Q)] = tuple(mats)
    Q_ = Module(M.ringoid, M.side, fibers, actions, name or f"{M}/sub")
    return Q_, ModuleMap(M, Q_, {P: q.as_hom() for P, q in maps.items()})


def enumerate_submodules(M: Module) -> list[Submodule]:
    """Every submodule, as sums of cyclic submodules, smallest first."""
    zero = submodule_generated(M, [])
    found = {zero.key(): zero}
    cyclic: dict[tuple, Submodule] = {}
    for P in M.objects:
        for v in M.elements(P):
            if any(v):
                S = submodule_generated(M, [(P, v)])
                cyclic.setdefault(S.key(), S)
    found.update(cyclic)
    frontier = list(cyclic.values())
    while frontier:
        fresh = []
        for S in frontier:
            for T in cyclic.values():
                U = S.plus(T)
                if U.key() not in found:
                    found[U.key()] = U
                    fresh.append(U)
        frontier = fresh
    return sorted(found.values(), key=lambda S: (S.order, S.key()))


# === presentations ===

def free_module(R: Ringoid, side: str, sorts: Sequence[str]) -> tuple[Module, SortedTuple]:
    """⊕ representables on `sorts` and its canonical generators (the identities)."""
    if not sorts:
        return zero_module(R, side), SortedTuple((), ())
    parts = [representable(R, P, side) for P in sorts]
    F = direct_sum_all(parts)
    A = F.acting
    entries = []
    for i, P in enumerate(sorts):
        blocks = [A.identities[P] if j == i else parts[j].fibers[P].zero for j in range(len(sorts))]
        entries.append(tuple(x for b in blocks for x in b))
    return F, SortedTuple(tuple(sorts), tuple(entries))


def finitely_presented(
    R: Ringoid,
    side: str,
    gen_sorts: Sequence[str],
    relations: Sequence[RelationColumn],
    name: str = "",
) -> tuple[Module, SortedTuple]:
    """
    The module on generators of sorts gen_sorts subject to the relation columns,
    and the images of its generators.
    """
    A = acting_category(R, side)
    for col in relations:
        if col.sort not in R.objects or len(col.entries) != len(gen_sorts):
            raise SortMismatch(f"relation of sort {col.sort} must have {len(gen_sorts)} entries")
        for P, e in zip(gen_sorts, col.entries):
            if len(e) != A.hom(P, col.sort).dim:
                raise SortMismatch(f"entry {e} is not a morphism between {P} and {col.sort}")
    F, gens = free_module(R, side, gen_sorts)
    rel_elements = [(col.sort, tuple(x for P, e in zip(gen_sorts, col.entries) for x in A.hom(P, col.sort).reduce(e))) for col in relations]
    M, proj = quotient(F, submodule_generated(F, rel_elements), name)
    return M, proj.apply_tuple(gens)


def generating_tuple(M: Module) -> SortedTuple:
    """Coordinate generators of the fibers, keeping each one not already generated."""
    sorts, entries = [], []
    current = submodule_generated(M, [])
    for P in M.objects:
        fiber = M.fibers[P]
        for i in range(fiber.dim):
            v = fiber.basis(i)
            if not current.contains(P, v):
                sorts.append(P)
                entries.append(v)
                current = current.plus(submodule_generated(M, [(P, v)]))
        if current.is_whole():
            break
    return SortedTuple(tuple(sorts), tuple(entries))


def tuple_map(M: Module, t: SortedTuple) -> ModuleMap:
    """The map ⊕ representables → M sending the canonical generators to t."""
    F, _ = free_module(M.ringoid, M.side, t.sorts)
    A = M.acting
    comps = {}
    for X in M.objects:
        rows = []
        for P, m in zip(t.sorts, t.entries):
            for b in range(A.hom(P, X).dim):
                rows.append(M.act(Morph(P, X, A.hom(P, X).basis(b)), m))
        comps[X] = GroupHom(F.fibers[X], M.fibers[X], tuple(rows))
    return ModuleMap(F, M, comps)


@dataclass(frozen=True, eq=False)
class Presentation:
    module: Module
    generators: SortedTuple
    relations: tuple[RelationColumn, ...]


def present(M: Module, generators: SortedTuple | None = None) -> Presentation:
    """Generators and a generating set of relations for M."""
    gens = generators if generators is not None else M.generators
    pi = tuple_map(M, gens)
    F = pi.source
    K = pi.kernel()
    A = M.acting
    relations = []
    current = submodule_generated(F, [])
    for X in M.objects:
        for v in K.parts[X].presentation.embedding:
            if any(v) and not current.contains(X, v):
                current = current.plus(submodule_generated(F, [(X, v)]))
                entries, at = [], 0
                for P in gens.sorts:
                    d = A.hom(P, X).dim
                    entries.append(tuple(v[at:at + d]))
                    at += d
                relations.append(RelationColumn(X, tuple(entries)))
    return Presentation(M, gens, tuple(relations))


# === Hom groups ===

class HomGroup:
    """
    Hom(M, N) as a subgroup of a parameter group: a component matrix entry from
    coordinate i (order dᵢ) to coordinate j (order eⱼ) is v·(eⱼ/g) for
    v in ℤ/g, g = gcd(dᵢ, eⱼ). Naturality cuts out the subgroup.
    """

    def __init__(self, source: Module, target: Module):
        _same_category(source, target)
        self.source = source
        self.target = target
        self.layout: list[tuple[str, int, int, int]] = []
        moduli = []
        for P in source.objects:
            for i, d in enumerate(source.fibers[P].moduli):
                for j, e in enumerate(target.fibers[P].moduli):
                    g = gcd(d, e)
                    self.layout.append((P, i, j, e // g))
                    moduli.append(g)
        self.parameters = FinAbGroup(tuple(moduli))

        A = source.acting
        checks = []
        for P, Q in itertools.product(source.objects, repeat=2):
            for t in A.basis(P, Q):
                for i in range(source.fibers[P].dim):
                    checks.append((t, source.fibers[P].basis(i)))
        constraint_group = direct_sum_groups([target.fibers[t.cod] for t, _ in checks])

        def defect(params):
            f = self.to_map(params)
            out = []
            for t, v in checks:
                out.extend(target.fibers[t.cod].sub(f.apply(t.cod, source.act(t, v)), target.act(t, f.apply(t.dom, v))))
            return out

        self.subgroup = GroupHom.from_function(self.parameters, constraint_group, defect).kernel()

    @property
    def order(self) -> int:
        return self.subgroup.order

    def to_map(self, params: Sequence[int]) -> ModuleMap:
        rows = {P: [[0] * self.target.fibers[P].dim for _ in range(self.source.fibers[P].dim)] for P in self.source.objects}
        for value, (P, i, j, step) in zip(params, self.layout):
            rows[P][i][j] = value * step
        comps = {
            P: GroupHom(self.source.fibers[P], self.target.fibers[P], tuple(self.target.fibers[P].reduce(r) for r in rows[P]))
            for P in self.source.objects
        }
        return ModuleMap(self.source, self.target, comps)

    def maps(self) -> list[ModuleMap]:
        """Every module map, sorted by the coordinates of the generator images."""
        return sorted((self.to_map(p) for p in self.subgroup.elements()), key=lambda f: f.key())


def hom_group(M: Module, N: Module) -> HomGroup:
    return HomGroup(M, N)


def hom_set(M: Module, N: Module) -> list[ModuleMap]:
    return HomGroup(M, N).maps()


@dataclass(frozen=True, eq=False)
class MapFactorization:
    kernel: Module
    kernel_inclusion: ModuleMap
    image: Module
    image_inclusion: ModuleMap
    cokernel: Module
    cokernel_projection: ModuleMap


def map_factor(f: ModuleMap) -> MapFactorization:
    """Objectwise kernel, image and cokernel of a module map."""
    K, k = f.kernel().embedded
    image = f.image()
    I, i = image.embedded
    C, c = quotient(f.target, image, "coker")
    return MapFactorization(K, k, I, i, C, c)
