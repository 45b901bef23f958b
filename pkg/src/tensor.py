"""
tensor.py
---------
Tensor product M ⊗ N of a right module M and a left module N over a ringoid.

The group is ⊕_P M(P) ⊗_ℤ N(P) modulo (m·r) ⊗ n − m ⊗ (r·n) for every
generator r: P → Q of the ringoid, m in M(Q), n in N(P), reduced by Smith normal
form. Nothing here goes through pp formulas, so it serves as an independent
oracle for the duality checks.
"""

from __future__ import annotations

from math import gcd
from typing import Sequence

from errors import SideMismatch, SortMismatch
from groups import Element, FinAbGroup, GroupHom, Subgroup
from modules import Module, ModuleMap, SortedTuple


class Tensor:
    def __init__(self, M: Module, N: Module):
        if M.side != "right" or N.side != "left":
            raise SideMismatch("tensor products pair a right module with a left module")
        if M.ringoid is not N.ringoid and not M.ringoid.structurally_equal(N.ringoid):
            raise SortMismatch("tensor factors live over different ringoids")
        self.M = M
        self.N = N
        R = M.ringoid

        self.offsets: dict[str, int] = {}
        moduli: list[int] = []
        for P in R.objects:
            self.offsets[P] = len(moduli)
            for d in M.fibers[P].moduli:
                for e in N.fibers[P].moduli:
                    moduli.append(gcd(d, e))
        self.free = FinAbGroup(tuple(moduli))

        relations = []
        for P in R.objects:
            for Q in R.objects:
                for r in R.basis(P, Q):
                    for i in range(M.fibers[Q].dim):
                        m = M.fibers[Q].basis(i)
                        for j in range(N.fibers[P].dim):
                            n = N.fibers[P].basis(j)
                            lhs = self.elementary(P, M.act_ring(r, m), n)
                            rhs = self.elementary(Q, m, N.act_ring(r, n))
                            rel = self.free.sub(lhs, rhs)
                            if any(rel):
                                relations.append(rel)
        self.relations = Subgroup(self.free, tuple(relations))
        self._quotient = self.free.quotient(self.relations)
        self.group: FinAbGroup = self._quotient.group

    @property
    def order(self) -> int:
        return self.group.order

    def elementary(self, P: str, x: Sequence[int], y: Sequence[int]) -> Element:
        """x ⊗ y in the free coordinates, for x in M(P), y in N(P)."""
        out = [0] * self.free.dim
        at = self.offsets[P]
        width = self.N.fibers[P].dim
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    if b:
                        out[at + i * width + j] += a * b
        return self.free.reduce(out)

    def class_of(self, r: SortedTuple, s: SortedTuple) -> Element:
        """The class of Σ rᵢ ⊗ sᵢ."""
        if r.sorts != s.sorts:
            raise SortMismatch(f"tuples have sorts {r.sorts} and {s.sorts}")
        total = self.free.zero
        for P, x, y in zip(r.sorts, r.entries, s.entries):
            total = self.free.add(total, self.elementary(P, x, y))
        return self._quotient.project(total)

    def _decompose(self, v: Sequence[int]):
        """Free coordinates → [(P, i, j, coefficient)]."""
        for P, at in self.offsets.items():
            width = self.N.fibers[P].dim
            for i in range(self.M.fibers[P].dim):
                for j in range(width):
                    c = v[at + i * width + j]
                    if c:
                        yield P, i, j, c

    def induced(self, other: "Tensor", left: ModuleMap | None = None, right: ModuleMap | None = None) -> GroupHom:
        """f ⊗ g: self → other for maps on the right factor (`right`) and the left factor (`left`)."""
        rows = []
        for k in range(self.group.dim):
            lifted = self._quotient.lift(self.group.basis(k))
            total = other.free.zero
            for P, i, j, c in self._decompose(lifted):
                x = self.M.fibers[P].basis(i)
                y = self.N.fibers[P].basis(j)
                if right is not None:
                    x = right.apply(P, x)
                if left is not None:
                    y = left.apply(P, y)
                total = other.free.add(total, other.free.scale(c, other.elementary(P, x, y)))
            rows.append(other._quotient.project(total))
        return GroupHom(self.group, other.group, tuple(rows))


def tensor(M: Module, N: Module) -> Tensor:
    return Tensor(M, N)


def tensor_map(M: Module, f: ModuleMap) -> GroupHom:
    """1_M ⊗ f : M ⊗ source(f) → M ⊗ target(f) for a map f of left modules."""
    return Tensor(M, f.source).induced(Tensor(M, f.target), left=f)
