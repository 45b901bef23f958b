"""
groups.py
---------
Finite abelian groups in cyclic coordinates, their homomorphisms, subgroups,
quotients and subquotients.

An element is a tuple of ints, coordinate i reduced modulo moduli[i]. Moduli
coming out of a quotient are invariant factors (d₁ | d₂ | …); direct sums simply
concatenate, so a group is not required to be in invariant-factor form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import prod
from typing import Callable, Iterator, Sequence

from linalg import (
    LatticeSolver,
    cokernel_presentation,
    hermite_basis,
    left_kernel,
    vec_mat,
)

Element = tuple[int, ...]


@dataclass(frozen=True)
class FinAbGroup:
    moduli: tuple[int, ...]

    def __post_init__(self):
        if any(d < 1 for d in self.moduli):
            raise ValueError(f"moduli must be positive, got {self.moduli}")

    @property
    def dim(self) -> int:
        return len(self.moduli)

    @property
    def order(self) -> int:
        return prod(self.moduli)

    @property
    def zero(self) -> Element:
        return tuple(0 for _ in self.moduli)

    def is_trivial(self) -> bool:
        return self.order == 1

    def reduce(self, v: Sequence[int]) -> Element:
        return tuple(x % d for x, d in zip(v, self.moduli))

    def add(self, u: Sequence[int], v: Sequence[int]) -> Element:
        return tuple((a + b) % d for a, b, d in zip(u, v, self.moduli))

    def sub(self, u: Sequence[int], v: Sequence[int]) -> Element:
        return tuple((a - b) % d for a, b, d in zip(u, v, self.moduli))

    def neg(self, v: Sequence[int]) -> Element:
        return tuple((-a) % d for a, d in zip(v, self.moduli))

    def scale(self, c: int, v: Sequence[int]) -> Element:
        return tuple((c * a) % d for a, d in zip(v, self.moduli))

    def basis(self, i: int) -> Element:
        return self.reduce([int(i == j) for j in range(self.dim)])

    def is_element(self, v: Sequence[int]) -> bool:
        return len(v) == self.dim and all(0 <= a < d for a, d in zip(v, self.moduli))

    def elements(self) -> Iterator[Element]:
        """All elements, lexicographic in coordinates."""
        return itertools.product(*(range(d) for d in self.moduli))

    def diag_rows(self) -> list[list[int]]:
        return [[d if i == j else 0 for j in range(self.dim)] for i, d in enumerate(self.moduli)]

    def invariant_factors(self) -> tuple[int, ...]:
        moduli, _, _ = cokernel_presentation(self.diag_rows(), self.dim)
        return tuple(moduli)

    def direct_sum(self, other: "FinAbGroup") -> "FinAbGroup":
        return FinAbGroup(self.moduli + other.moduli)

    def quotient(self, sub: "Subgroup") -> "QuotientMap":
        relations = [list(g) for g in sub.generators] + self.diag_rows()
        moduli, projection, lift = cokernel_presentation(relations, self.dim)
        return QuotientMap(self, FinAbGroup(tuple(moduli)), projection, lift)

    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(self.basis(i) for i in range(self.dim)))

    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup(self, ())


def direct_sum_groups(groups: Sequence[FinAbGroup]) -> FinAbGroup:
    return FinAbGroup(tuple(d for g in groups for d in g.moduli))


@dataclass(frozen=True)
class QuotientMap:
    source: FinAbGroup
    group: FinAbGroup
    projection: list
    lift_matrix: list

    def project(self, v: Sequence[int]) -> Element:
        return self.group.reduce(vec_mat(v, self.projection, self.group.dim))

    def lift(self, y: Sequence[int]) -> Element:
        return self.source.reduce(vec_mat(y, self.lift_matrix, self.source.dim))

    def as_hom(self) -> "GroupHom":
        return GroupHom(self.source, self.group, tuple(self.project(self.source.basis(i)) for i in range(self.source.dim)))


@dataclass(frozen=True, eq=False)
class GroupHom:
    """x ↦ x·matrix; row i is the image of the i-th coordinate generator."""

    source: FinAbGroup
    target: FinAbGroup
    matrix: tuple[Element, ...]

    @classmethod
    def from_function(cls, source: FinAbGroup, target: FinAbGroup, f: Callable[[Element], Sequence[int]]) -> "GroupHom":
        return cls(source, target, tuple(target.reduce(f(source.basis(i))) for i in range(source.dim)))

    @classmethod
    def zero(cls, source: FinAbGroup, target: FinAbGroup) -> "GroupHom":
        return cls(source, target, tuple(target.zero for _ in range(source.dim)))

    @classmethod
    def identity(cls, group: FinAbGroup) -> "GroupHom":
        return cls(group, group, tuple(group.basis(i) for i in range(group.dim)))

    def apply(self, v: Sequence[int]) -> Element:
        return self.target.reduce(vec_mat(v, self.matrix, self.target.dim))

    def is_well_defined(self) -> bool:
        return all(
            self.target.scale(d, row) == self.target.zero
            for d, row in zip(self.source.moduli, self.matrix)
        )

    def then(self, other: "GroupHom") -> "GroupHom":
        """self followed by other."""
        return GroupHom(self.source, other.target, tuple(other.apply(row) for row in self.matrix))

    def add(self, other: "GroupHom") -> "GroupHom":
        return GroupHom(self.source, self.target, tuple(self.target.add(a, b) for a, b in zip(self.matrix, other.matrix)))

    def sub(self, other: "GroupHom") -> "GroupHom":
        return GroupHom(self.source, self.target, tuple(self.target.sub(a, b) for a, b in zip(self.matrix, other.matrix)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupHom):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.matrix))

    @cached_property
    def _solver(self) -> LatticeSolver:
        rows = [list(r) for r in self.matrix] + self.target.diag_rows()
        return LatticeSolver(rows, self.target.dim)

    def kernel(self) -> "Subgroup":
        gens = [self.source.reduce(u[: self.source.dim]) for u in self._solver.kernel]
        return Subgroup(self.source, tuple(g for g in gens if any(g)))

    def image(self) -> "Subgroup":
        return Subgroup(self.target, tuple(r for r in self.matrix if any(r)))

    def preimage_of(self, y: Sequence[int]) -> Element | None:
        """Some x with self(x) = y, or None when y is not in the image."""
        u = self._solver.solve(list(y))
        if u is None:
            return None
        return self.source.reduce(u[: self.source.dim])

    def preimage(self, sub: "Subgroup") -> "Subgroup":
        q = self.target.quotient(sub)
        return self.then(q.as_hom()).kernel()

    def is_injective(self) -> bool:
        return self.kernel().order == 1

    def is_surjective(self) -> bool:
        return self.image().order == self.target.order


@dataclass(frozen=True, eq=False)
class Subgroup:
    """The subgroup of `ambient` generated by `generators`."""

    ambient: FinAbGroup
    generators: tuple[Element, ...]

    @cached_property
    def _hnf(self) -> list[list[int]]:
        rows = [list(g) for g in self.generators] + self.ambient.diag_rows()
        return hermite_basis(rows, self.ambient.dim)

    @cached_property
    def index(self) -> int:
        return prod(self._hnf[i][i] for i in range(self.ambient.dim))

    @property
    def order(self) -> int:
        return self.ambient.order // self.index

    def key(self) -> tuple:
        """Canonical form: equal keys iff equal subgroups of the same ambient group."""
        return (self.ambient.moduli, tuple(tuple(r) for r in self._hnf))

    def contains(self, v: Sequence[int]) -> bool:
        residual = list(v)
        for k in range(self.ambient.dim):
            p = self._hnf[k][k]
            entry = residual[k]
            if entry % p:
                return False
            q = entry // p
            if q:
                row = self._hnf[k]
                residual = [a - q * b for a, b in zip(residual, row)]
        return True

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def issubset(self, other: "Subgroup") -> bool:
        return all(other.contains(g) for g in self.generators)

    def equals(self, other: "Subgroup") -> bool:
        return self.ambient == other.ambient and self.key() == other.key()

    def plus(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.ambient, self.generators + other.generators)

    def intersection(self, other: "Subgroup") -> "Subgroup":
        n = self.ambient.dim
        mine, theirs = self._hnf, other._hnf
        gens = []
        for u in left_kernel(mine + theirs, n):
            g = self.ambient.reduce(vec_mat(u[: len(mine)], mine, n))
            if any(g):
                gens.append(g)
        return Subgroup(self.ambient, tuple(gens))

    def image(self, hom: GroupHom) -> "Subgroup":
        return Subgroup(hom.target, tuple(hom.apply(g) for g in self.generators))

    @cached_property
    def presentation(self) -> "SubgroupPresentation":
        return SubgroupPresentation(self)

    def elements(self) -> Iterator[Element]:
        p = self.presentation
        for y in p.group.elements():
            yield p.embed(y)

    def quotient(self, sub: "Subgroup") -> "SubQuotient":
        """self / sub for a subgroup `sub` contained in self."""
        p = self.presentation
        inner = Subgroup(p.group, tuple(p.coords(g) for g in sub.generators))
        return SubQuotient(self, sub, p, p.group.quotient(inner))


class SubgroupPresentation:
    """A subgroup S presented as an abstract FinAbGroup with embedding and coordinates."""

    def __init__(self, sub: Subgroup):
        self.subgroup = sub
        ambient = sub.ambient
        gens = [list(g) for g in sub.generators]
        k = len(gens)
        self._solver = LatticeSolver(gens + ambient.diag_rows(), ambient.dim)
        relations = [u[:k] for u in self._solver.kernel]
        moduli, projection, lift = cokernel_presentation(relations, k)
        self.group = FinAbGroup(tuple(moduli))
        self._projection = projection
        self._k = k
        self.embedding = tuple(
            ambient.reduce(vec_mat(row, gens, ambient.dim)) for row in lift
        )

    def embed(self, y: Sequence[int]) -> Element:
        return self.subgroup.ambient.reduce(vec_mat(y, self.embedding, self.subgroup.ambient.dim))

    def coords(self, v: Sequence[int]) -> Element:
        u = self._solver.solve(list(v))
        if u is None:
            raise ValueError(f"{tuple(v)} is not in the subgroup")
        return self.group.reduce(vec_mat(u[: self._k], self._projection, self.group.dim))

    def embedding_hom(self) -> GroupHom:
        return GroupHom(self.group, self.subgroup.ambient, self.embedding)


class SubQuotient:
    """top / bottom for subgroups bottom ⊆ top of one ambient group."""

    def __init__(self, top: Subgroup, bottom: Subgroup, presentation: SubgroupPresentation, quotient: QuotientMap):
        self.top = top
        self.bottom = bottom
        self._presentation = presentation
        self._quotient = quotient
        self.group = quotient.group

    @property
    def order(self) -> int:
        return self.group.order

    def project(self, v: Sequence[int]) -> Element:
        """Class of an element of `top`."""
        return self._quotient.project(self._presentation.coords(v))

    def lift(self, y: Sequence[int]) -> Element:
        return self._presentation.embed(self._quotient.lift(y))
