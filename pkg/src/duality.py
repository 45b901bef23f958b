"""
duality.py
----------
Elementary duality of pp formulas and the tensor criterion tying it to
vanishing of r̄ ⊗ s̄.

For φ = ∃ȳ (x̄ ȳ) H = 0 with H split into A (free rows) and B (bound rows), the
dual is the formula of the other side

    Dφ(x̄) = ∃z̄ [I A; 0 B] (x̄ z̄) = 0

with one bound variable per relation column of φ and one equation per variable
of φ. An entry of H is a morphism of the ringoid whichever side reads it, so the
coordinates carry over unchanged; only the acting category flips.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

from errors import OracleDisagreement, SideMismatch, SortMismatch
from groups import Element, FinAbGroup
from modules import Module, SortedTuple, acting_category, other_side
from persistence import log_action
from pp_formula import PpFormula, principal_type, satisfies, zero_formula
from pp_pairs import PpPair, make_pair
from tensor import Tensor


def dual(phi: PpFormula) -> PpFormula:
    side = other_side(phi.side)
    B = acting_category(phi.ringoid, side)
    variables = phi.variable_sorts
    rows = []
    for i, P in enumerate(phi.free_sorts):
        rows.append(tuple(B.identities[P] if l == i else B.hom(P, V).zero for l, V in enumerate(variables)))
    for j, S in enumerate(phi.relation_sorts):
        rows.append(tuple(phi.matrix[l][j] for l in range(len(variables))))
    return PpFormula(phi.ringoid, side, phi.free_sorts, phi.relation_sorts, variables, tuple(rows))


def dual_pair(p: PpPair) -> PpPair:
    """φ/ψ ↦ Dψ/Dφ."""
    return make_pair(dual(p.bottom), dual(p.top), f"D({p.label})" if p.label else "")


def dual_axioms(pairs: Sequence[PpPair]) -> list[PpPair]:
    """The dual list of pairs axiomatising a definable subcategory."""
    return [dual_pair(p) for p in pairs]


# === tensor criterion ===

@dataclass(frozen=True)
class HerzogWitness:
    formula: PpFormula
    dual_formula: PpFormula
    tensor_class: Element

    status = "witness"


@dataclass(frozen=True)
class NonzeroTensor:
    tensor_class: Element
    class_order: int
    formula: PpFormula
    dual_formula: PpFormula

    status = "nonzero"


def element_order(G: FinAbGroup, v: Sequence[int]) -> int:
    order = 1
    for d, c in zip(G.moduli, v):
        k = d // gcd(d, c % d)
        order = order * k // gcd(order, k)
    return order


def herzog_check(
    r: SortedTuple,
    M: Module,
    s: SortedTuple,
    N: Module,
    family: Sequence[PpFormula] | None = None,
    tensor_product: Tensor | None = None,
) -> HerzogWitness | NonzeroTensor:
    """
    Decide r̄ ⊗ s̄ = 0 for r̄ from a right module M and s̄ from a left module N.

    A vanishing class returns φ = the principal type of r̄ with r̄ ∈ φ(M) and
    s̄ ∈ Dφ(N) verified. A nonzero class is certified by s̄ ∉ Dφ(N) for that same
    φ, which is the weakest formula r̄ satisfies. Formulas from `family` are
    cross-checked: none may hold both ways when the class is nonzero.
    """
    if M.side != "right" or N.side != "left":
        raise SideMismatch("herzog_check pairs a right module with a left module")
    if r.sorts != s.sorts:
        raise SortMismatch(f"tuples have sorts {r.sorts} and {s.sorts}")
    M.check_tuple(r)
    N.check_tuple(s)
    T = tensor_product if tensor_product is not None else Tensor(M, N)
    t = T.class_of(r, s)

    if not any(any(e) for e in r.entries):
        phi = zero_formula(M.ringoid, "right", r.sorts)
    else:
        phi = principal_type(r, M)
    d_phi = dual(phi)
    in_top = satisfies(phi, M, r)
    in_dual = satisfies(d_phi, N, s)
    if not in_top:
        raise OracleDisagreement(f"{r} does not satisfy its own principal type")

    if not any(t):
        if not in_dual:
            raise OracleDisagreement(f"{r} ⊗ {s} vanishes but {s} fails the dual of the principal type")
        log_action(f"Herzog check on {M} ⊗ {N}: class vanishes, witness {phi}")
        return HerzogWitness(phi, d_phi, t)

    if in_dual:
        raise OracleDisagreement(f"{r} ⊗ {s} is nonzero but a witness formula exists")
    for chi in family or ():
        if chi.free_sorts == r.sorts and chi.side == "right":
            if satisfies(chi, M, r) and satisfies(dual(chi), N, s):
                raise OracleDisagreement(f"{chi} witnesses {r} ⊗ {s} = 0 but the class is nonzero")
    log_action(f"Herzog check on {M} ⊗ {N}: nonzero class {t}")
    return NonzeroTensor(t, element_order(T.group, t), phi, d_phi)
