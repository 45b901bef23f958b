"""
ringoid.py
----------
Finite preadditive categories ("ringoids"). A one-object ringoid is a finite ring.

Storage:
- homs[(P, Q)]        FinAbGroup of morphisms P → Q
- labels[(P, Q)]      a name for each coordinate generator of homs[(P, Q)]
- table[(P, Q, S)][a][b]
                      coordinates in hom(P, S) of g_a ∘ f_b, where g_a is the
                      a-th generator of hom(Q, S) and f_b the b-th of hom(P, Q)
- identities[P]       coordinates of 1_P in hom(P, P)

Composition is read off the table bilinearly. `compose(g, f)` is g ∘ f (first f,
then g); for a ring, the product r·s is compose(r, s).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Mapping, Sequence

from config import MAX_RINGOID_ORDER
from errors import AxiomViolation, DocumentError, DomainMismatch, ScopeError
from groups import Element, FinAbGroup, Subgroup
from persistence import log_action


@dataclass(frozen=True)
class Morph:
    dom: str
    cod: str
    elem: Element

    def __str__(self) -> str:
        return f"{self.dom}->{self.cod}:{','.join(map(str, self.elem))}"


@dataclass(frozen=True, eq=False)
class Ringoid:
    name: str
    objects: tuple[str, ...]
    homs: Mapping[tuple[str, str], FinAbGroup]
    table: Mapping[tuple[str, str, str], tuple[tuple[Element, ...], ...]]
    identities: Mapping[str, Element]
    labels: Mapping[tuple[str, str], tuple[str, ...]] = field(default_factory=dict)

    # --- basic accessors ---------------------------------------------------

    def hom(self, P: str, Q: str) -> FinAbGroup:
        return self.homs[(P, Q)]

    @property
    def is_ring(self) -> bool:
        return len(self.objects) == 1

    @property
    def total_order(self) -> int:
        return sum(g.order for g in self.homs.values())

    def require_ring(self, operation: str) -> str:
        """The single object of a ring; ScopeError for a multi-object ringoid."""
        if not self.is_ring:
            raise ScopeError(f"{operation} is only defined over one-object ringoids, '{self.name}' has {len(self.objects)} objects")
        return self.objects[0]

    def compose(self, g: Sequence[int], f: Sequence[int], P: str, Q: str, S: str) -> Element:
        """g ∘ f for g in hom(Q, S), f in hom(P, Q), as coordinates in hom(P, S)."""
        target = self.homs[(P, S)]
        rows = self.table[(P, Q, S)]
        out = [0] * target.dim
        for a, ga in enumerate(g):
            if not ga:
                continue
            row = rows[a]
            for b, fb in enumerate(f):
                if fb:
                    c = ga * fb
                    for k, v in enumerate(row[b]):
                        out[k] += c * v
        return target.reduce(out)

    def then(self, f: Morph, g: Morph) -> Morph:
        return self.compose_morph(g, f)

    def compose_morph(self, g: Morph, f: Morph) -> Morph:
        if f.cod != g.dom:
            raise DomainMismatch(f"cannot compose {g} after {f}")
        return Morph(f.dom, g.cod, self.compose(g.elem, f.elem, f.dom, f.cod, g.cod))

    def mul(self, r: Sequence[int], s: Sequence[int]) -> Element:
        P = self.require_ring("ring multiplication")
        return self.compose(r, s, P, P, P)

    # --- morphisms ----------------------------------------------------------

    def morph(self, P: str, Q: str, elem: Sequence[int]) -> Morph:
        return Morph(P, Q, self.homs[(P, Q)].reduce(elem))

    def identity(self, P: str) -> Morph:
        return Morph(P, P, self.identities[P])

    def zero(self, P: str, Q: str) -> Morph:
        return Morph(P, Q, self.homs[(P, Q)].zero)

    def basis(self, P: str, Q: str) -> list[Morph]:
        group = self.homs[(P, Q)]
        return [Morph(P, Q, group.basis(i)) for i in range(group.dim)]

    def morphisms(self, P: str, Q: str) -> Iterator[Morph]:
        """Every morphism P → Q, in coordinate order."""
        for e in self.homs[(P, Q)].elements():
            yield Morph(P, Q, e)

    def all_morphisms(self) -> Iterator[Morph]:
        for P in self.objects:
            for Q in self.objects:
                yield from self.morphisms(P, Q)

    def label(self, P: str, Q: str, i: int) -> str:
        names = self.labels.get((P, Q))
        if names and i < len(names):
            return names[i]
        return f"{P}{Q}{i}" if not self.is_ring else f"g{i}"

    def label_index(self) -> dict[str, list[tuple[str, str, int]]]:
        """label → [(P, Q, generator index)], for resolving DSL names."""
        index: dict[str, list[tuple[str, str, int]]] = {}
        for (P, Q), group in self.homs.items():
            for i in range(group.dim):
                index.setdefault(self.label(P, Q, i), []).append((P, Q, i))
        return index

    # --- opposite -----------------------------------------------------------

    @cached_property
    def opposite(self) -> "Ringoid":
        homs = {(P, Q): self.homs[(Q, P)] for (P, Q) in self.homs}
        table = {}
        for P, Q, S in itertools.product(self.objects, repeat=3):
            source = self.table[(S, Q, P)]
            nq = self.homs[(S, Q)].dim
            nb = self.homs[(Q, P)].dim
            table[(P, Q, S)] = tuple(
                tuple(source[b][a] for b in range(nb)) for a in range(nq)
            )
        labels = {(P, Q): names for (Q, P), names in self.labels.items()}
        name = self.name[:-3] if self.name.endswith("^op") else f"{self.name}^op"
        op = Ringoid(name, self.objects, homs, table, dict(self.identities), labels)
        op.__dict__["opposite"] = self
        return op

    def structurally_equal(self, other: "Ringoid") -> bool:
        return (
            self.objects == other.objects
            and dict(self.homs) == dict(other.homs)
            and dict(self.table) == dict(other.table)
            and dict(self.identities) == dict(other.identities)
        )


def _check_shapes(objects, homs, table, identities):
    for P, Q in itertools.product(objects, repeat=2):
        if (P, Q) not in homs:
            raise DocumentError(f"missing hom group for ({P}, {Q})")
    for P in objects:
        if P not in identities or not homs[(P, P)].is_element(identities[P]):
            raise DocumentError(f"identity of {P} is missing or not reduced")
    for P, Q, S in itertools.product(objects, repeat=3):
        rows = table.get((P, Q, S))
        nq, nb, ns = homs[(Q, S)].dim, homs[(P, Q)].dim, homs[(P, S)].dim
        if rows is None or len(rows) != nq or any(len(r) != nb for r in rows):
            raise DocumentError(f"composition table ({P}, {Q}, {S}) must be {nq} × {nb}")
        for row in rows:
            for value in row:
                if len(value) != ns:
                    raise DocumentError(f"composition value in ({P}, {Q}, {S}) must have {ns} coordinates")


def _check_axioms(R: Ringoid):
    objects = R.objects
    # bilinearity: g_a of order d must compose to something killed by d
    for P, Q, S in itertools.product(objects, repeat=3):
        hom_qs, hom_pq, hom_ps = R.hom(Q, S), R.hom(P, Q), R.hom(P, S)
        for a, b in itertools.product(range(hom_qs.dim), range(hom_pq.dim)):
            value = R.table[(P, Q, S)][a][b]
            for d in (hom_qs.moduli[a], hom_pq.moduli[b]):
                if any(x for x in hom_ps.scale(d, value)):
                    g, f = Morph(Q, S, hom_qs.basis(a)), Morph(P, Q, hom_pq.basis(b))
                    raise AxiomViolation("bilinearity", (g, f), f"order {d} does not annihilate the composite")

    for P, Q in itertools.product(objects, repeat=2):
        for f in R.basis(P, Q):
            if R.compose_morph(R.identity(Q), f) != f:
                raise AxiomViolation("identity", (R.identity(Q), f), "left identity law fails")
            if R.compose_morph(f, R.identity(P)) != f:
                raise AxiomViolation("identity", (f, R.identity(P)), "right identity law fails")

    # composition is bilinear, so associativity on generator triples is enough
    for P, Q, S, U in itertools.product(objects, repeat=4):
        for h in R.basis(S, U):
            for g in R.basis(Q, S):
                hg = R.compose_morph(h, g)
                for f in R.basis(P, Q):
                    if R.compose_morph(hg, f) != R.compose_morph(h, R.compose_morph(g, f)):
                        raise AxiomViolation("associativity", (h, g, f))


def build_ringoid(
    name: str,
    objects: Sequence[str],
    homs: Mapping[tuple[str, str], FinAbGroup],
    table: Mapping[tuple[str, str, str], Sequence[Sequence[Sequence[int]]]],
    identities: Mapping[str, Sequence[int]],
    labels: Mapping[tuple[str, str], Sequence[str]] | None = None,
) -> Ringoid:
    """
    Validate the tables and return a Ringoid.

    Raises DocumentError for malformed tables and AxiomViolation (with the
    offending morphisms as witness) when bilinearity, identity or
    associativity fails.
    """
    objects = tuple(objects)
    if len(set(objects)) != len(objects):
        raise DocumentError(f"duplicate object names in {objects}")
    homs = {k: v for k, v in homs.items()}
    _check_shapes(objects, homs, table, identities)

    total = sum(g.order for g in homs.values())
    if total > MAX_RINGOID_ORDER:
        raise DocumentError(f"ringoid '{name}' has total hom order {total}, above the bound {MAX_RINGOID_ORDER}")

    frozen_table = {
        key: tuple(tuple(homs[(key[0], key[2])].reduce(v) for v in row) for row in rows)
        for key, rows in table.items()
        if key[0] in objects and key[1] in objects and key[2] in objects
    }
    R = Ringoid(
        name,
        objects,
        homs,
        frozen_table,
        {P: tuple(identities[P]) for P in objects},
        {k: tuple(v) for k, v in (labels or {}).items()},
    )
    _check_axioms(R)
    log_action(f"Ringoid '{name}' validated: {len(objects)} object(s), total hom order {total}")
    return R


# === von Neumann regularity ===

@dataclass
class RegularityResult:
    regular: bool
    witnesses: dict[Morph, Morph] = field(default_factory=dict)
    counterexample: Morph | None = None


def is_von_neumann_regular(R: Ringoid) -> RegularityResult:
    """
    r: P → Q is regular when some s: Q → P has r∘s∘r = r. The witness for each r
    is the first such s in coordinate order; the counterexample is the first
    r without one.
    """
    witnesses: dict[Morph, Morph] = {}
    for P, Q in itertools.product(R.objects, repeat=2):
        candidates = list(R.morphisms(Q, P))
        for r in R.morphisms(P, Q):
            found = None
            for s in candidates:
                if R.compose_morph(r, R.compose_morph(s, r)) == r:
                    found = s
                    break
            if found is None:
                log_action(f"VNR check on '{R.name}': not regular, counterexample {r}")
                return RegularityResult(False, witnesses, r)
            witnesses[r] = found
    log_action(f"VNR check on '{R.name}': regular ({len(witnesses)} morphisms)")
    return RegularityResult(True, witnesses)


# === left ideals ===

@dataclass(frozen=True, eq=False)
class LeftIdeal:
    """A subfunctor of the representable (base, −): parts[Q] ⊆ hom(base, Q)."""

    ringoid: Ringoid
    base: str
    parts: Mapping[str, Subgroup]
    generators: tuple[Morph, ...]

    def key(self) -> tuple:
        return (self.base,) + tuple(self.parts[Q].key() for Q in self.ringoid.objects)

    @property
    def order(self) -> int:
        return sum(self.parts[Q].order for Q in self.ringoid.objects)

    def contains(self, m: Morph) -> bool:
        return m.dom == self.base and self.parts[m.cod].contains(m.elem)

    def is_zero(self) -> bool:
        return all(self.parts[Q].order == 1 for Q in self.ringoid.objects)

    def equals(self, other: "LeftIdeal") -> bool:
        return self.key() == other.key()

    def members(self, Q: str) -> list[Morph]:
        return [Morph(self.base, Q, e) for e in sorted(self.parts[Q].elements())]

    def __str__(self) -> str:
        shown = {Q: [",".join(map(str, m.elem)) for m in self.members(Q)] for Q in self.ringoid.objects}
        return f"ideal at {self.base}: " + "; ".join(f"{Q}: {{{' '.join(v)}}}" for Q, v in shown.items())


def ideal_generated(R: Ringoid, base: str, gens: Sequence[Morph]) -> LeftIdeal:
    """part(Q) is spanned by t ∘ g for every generator g and every t: cod(g) → Q."""
    for g in gens:
        if g.dom != base:
            raise DomainMismatch(f"generator {g} does not start at {base}")
    parts = {}
    for Q in R.objects:
        spanning = []
        for g in gens:
            for t in R.basis(g.cod, Q):
                spanning.append(R.compose(t.elem, g.elem, base, g.cod, Q))
        parts[Q] = Subgroup(R.hom(base, Q), tuple(v for v in spanning if any(v)))
    return LeftIdeal(R, base, parts, tuple(gens))


def ideal_sum(I: LeftIdeal, J: LeftIdeal) -> LeftIdeal:
    parts = {Q: I.parts[Q].plus(J.parts[Q]) for Q in I.ringoid.objects}
    return LeftIdeal(I.ringoid, I.base, parts, I.generators + J.generators)


def enumerate_left_ideals(R: Ringoid, base: str) -> list[LeftIdeal]:
    """Every left ideal at `base`, as sums of principal ideals, smallest first."""
    found: dict[tuple, LeftIdeal] = {}
    zero = ideal_generated(R, base, [])
    found[zero.key()] = zero
    principal: dict[tuple, LeftIdeal] = {}
    for Q in R.objects:
        for m in R.morphisms(base, Q):
            if any(m.elem):
                I = ideal_generated(R, base, [m])
                principal.setdefault(I.key(), I)
    found.update(principal)

    frontier = list(principal.values())
    while frontier:
        fresh = []
        for I in frontier:
            for J in principal.values():
                S = ideal_sum(I, J)
                if S.key() not in found:
                    found[S.key()] = S
                    fresh.append(S)
        frontier = fresh
    return sorted(found.values(), key=lambda I: (I.order, I.key()))


def enumerate_right_ideals(R: Ringoid, base: str) -> list[LeftIdeal]:
    """Subfunctors of (−, base): the left ideals of the opposite ringoid."""
    return enumerate_left_ideals(R.opposite, base)
