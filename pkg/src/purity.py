"""
purity.py
---------
Purity, pure epimorphisms, flatness and absolute purity for finite modules.

Every decision has an independent oracle next to its pp characterisation:

  pure mono        retraction search (finite modules are pure-injective, so a
                   pure embedding splits) vs. the principal type of the image
                   of a generating tuple
  flat             injectivity of M ⊗ I → M ⊗ R over all one-sided ideals vs.
                   φ(M) = M·φ(R)
  absolutely pure  Baer's criterion over all ideals on the other side vs.
                   φ(M) = ann_M Dφ(R)

Flatness and absolute purity are ring-scoped: they raise ScopeError on a
ringoid with more than one object.
"""

from __future__ import annotations

from dataclasses import dataclass

from duality import dual
from errors import ArityError, NotEpi, NotMono, OracleDisagreement, SortMismatch
from groups import GroupHom, Subgroup, direct_sum_groups
from modules import (
    Module,
    ModuleMap,
    SortedTuple,
    Submodule,
    hom_group,
    hom_set,
    other_side,
    regular_module,
    tuple_map,
)
from persistence import log_action
from pp_formula import PpFormula, evaluate, pp_ideal, principal_type, satisfies
from ringoid import LeftIdeal, Morph, enumerate_left_ideals, enumerate_right_ideals
from tensor import Tensor


def power_map(f: ModuleMap, sorts: tuple[str, ...]) -> GroupHom:
    """fⁿ on tuples of the given sorts."""
    M, N = f.source, f.target
    source = M.power(sorts)
    target = N.power(sorts)

    def apply(v):
        t = M.unflatten(sorts, v)
        return N.flatten(f.apply_tuple(t))

    return GroupHom.from_function(source, target, apply)


def restricts_exactly(j: ModuleMap, phi: PpFormula) -> bool:
    """φ(M) = Mⁿ ∩ φ(N) along j: M → N."""
    inside = evaluate(phi, j.source).group
    pulled = power_map(j, phi.free_sorts).preimage(evaluate(phi, j.target).group)
    return inside.key() == pulled.key()


# === pure monomorphisms ===

@dataclass
class PurityResult:
    pure: bool
    retraction: ModuleMap | None = None
    witness: PpFormula | None = None
    generators: SortedTuple | None = None


def _find_retraction(j: ModuleMap) -> ModuleMap | None:
    """
    A map g: N → M with j·g = 1, solved for inside the Hom-group
    parametrisation.
    """
    M = j.source
    H = hom_group(j.target, M)
    pres = H.subgroup.presentation
    basis = [(P, M.fibers[P].basis(i)) for P in M.objects for i in range(M.fibers[P].dim)]
    target = direct_sum_groups([M.fibers[P] for P, _ in basis])

    def apply(y):
        g = H.to_map(pres.embed(y))
        return tuple(x for P, v in basis for x in g.apply(P, j.apply(P, v)))

    composite = GroupHom.from_function(pres.group, target, apply)
    y = composite.preimage_of(tuple(x for _, v in basis for x in v))
    if y is None:
        return None
    return H.to_map(pres.embed(y))


def is_pure_submodule(j: ModuleMap) -> PurityResult:
    if not j.is_injective():
        raise NotMono("is_pure_submodule needs an injective map")
    M, N = j.source, j.target
    retraction = _find_retraction(j)
    split = retraction is not None

    gens = M.generators
    witness = None
    if len(gens):
        phi = principal_type(j.apply_tuple(gens), N)
        typed = satisfies(phi, M, gens)
        if not typed:
            witness = phi
    else:
        typed = True

    if split != typed:
        raise OracleDisagreement(
            f"purity oracles disagree on {M} -> {N}: split={split}, principal type={typed}"
        )
    log_action(f"Purity of {M} -> {N}: {'pure' if split else 'not pure'}")
    return PurityResult(split, retraction, witness, gens)


# === pure epimorphisms ===

@dataclass
class PureEpiResult:
    pure: bool
    formula: PpFormula | None = None
    target_tuple: SortedTuple | None = None
    lift: SortedTuple | None = None


def is_pure_epi(p: ModuleMap) -> PureEpiResult:
    """
    p: B → C is pure when the generating tuple c̄ of C lifts to some b̄ in φ(B)
    for φ its principal type; then every pp-constrained tuple lifts.
    """
    if not p.is_surjective():
        raise NotEpi("is_pure_epi needs a surjective map")
    B, C = p.source, p.target
    c = C.generators
    if not len(c):
        return PureEpiResult(True, None, c, c)
    phi = principal_type(c, C)
    wanted = C.flatten(c)
    for v in evaluate(phi, B).group.elements():
        b = B.unflatten(c.sorts, v)
        if C.flatten(p.apply_tuple(b)) == wanted:
            log_action(f"Pure epi check on {B} -> {C}: pure")
            return PureEpiResult(True, phi, c, b)
    log_action(f"Pure epi check on {B} -> {C}: not pure, principal type {phi}")
    return PureEpiResult(False, phi, c)


# === flatness ===

@dataclass
class FlatResult:
    flat: bool
    failing_ideal: LeftIdeal | None = None


def _ideals_acting_on(M: Module, P: str) -> tuple[list[LeftIdeal], Module]:
    """One-sided ideals on the side opposite to M, and the regular module holding them."""
    R = M.ringoid
    if M.side == "right":
        return enumerate_left_ideals(R, P), regular_module(R, "left")
    return enumerate_right_ideals(R, P), regular_module(R, "right")


def ideal_module(I: LeftIdeal, regular: Module) -> tuple[Module, ModuleMap]:
    return Submodule(regular, dict(I.parts)).embedded


def is_flat(M: Module) -> FlatResult:
    """Tensoring with M keeps every ideal inclusion into R injective."""
    P = M.ringoid.require_ring("is_flat")
    ideals, regular = _ideals_acting_on(M, P)
    for I in ideals:
        sub, inclusion = ideal_module(I, regular)
        if M.side == "right":
            induced = Tensor(M, sub).induced(Tensor(M, regular), left=inclusion)
        else:
            induced = Tensor(sub, M).induced(Tensor(regular, M), right=inclusion)
        if not induced.is_injective():
            log_action(f"Flatness of {M}: not flat, failing {I}")
            return FlatResult(False, I)
    log_action(f"Flatness of {M}: flat ({len(ideals)} ideals)")
    return FlatResult(True)


def _check_one_variable(M: Module, phi: PpFormula, operation: str) -> str:
    P = M.ringoid.require_ring(operation)
    if phi.n != 1:
        raise ArityError(f"{operation} needs a formula in one free variable, got {phi.n}")
    if phi.side != M.side:
        raise SortMismatch(f"{operation}: a {phi.side} formula on a {M.side} module")
    return P


def _span_of_products(M: Module, P: str, scalars: Subgroup) -> Subgroup:
    fiber = M.fibers[P]
    products = []
    for i in range(fiber.dim):
        a = fiber.basis(i)
        for r in scalars.generators:
            v = M.act_ring(Morph(P, P, r), a)
            if any(v):
                products.append(v)
    return Subgroup(fiber, tuple(products))


@dataclass
class FormulaCheck:
    holds: bool
    formula_value: Subgroup
    comparison: Subgroup


def flat_formula_check(M: Module, phi: PpFormula) -> FormulaCheck:
    """φ(M) = M·φ(R)."""
    P = _check_one_variable(M, phi, "flat_formula_check")
    ideal = pp_ideal(phi)
    value = evaluate(phi, M).group
    span = _span_of_products(M, P, ideal.parts[P])
    return FormulaCheck(value.key() == span.key(), value, span)


# === absolute purity ===

@dataclass
class BaerResult:
    absolutely_pure: bool
    failing_ideal: LeftIdeal | None = None
    failing_map: ModuleMap | None = None


def _restrictions(M: Module, inclusion: ModuleMap, P: str) -> set[tuple]:
    """Keys of the maps I → R → M, one for each m ∈ M(P) deciding R → M."""
    found = set()
    for m in M.elements(P):
        extension = tuple_map(M, SortedTuple((P,), (m,)))
        found.add(inclusion.then(extension).key())
    return found


def is_absolutely_pure(M: Module) -> BaerResult:
    """Baer: every map I → M from an ideal of R extends over R."""
    P = M.ringoid.require_ring("is_absolutely_pure")
    R = M.ringoid
    if M.side == "right":
        ideals, regular = enumerate_right_ideals(R, P), regular_module(R, "right")
    else:
        ideals, regular = enumerate_left_ideals(R, P), regular_module(R, "left")
    for I in ideals:
        sub, inclusion = ideal_module(I, regular)
        extendable = _restrictions(M, inclusion, P)
        for f in hom_set(sub, M):
            if f.key() not in extendable:
                log_action(f"Absolute purity of {M}: fails on {I}")
                return BaerResult(False, I, f)
    log_action(f"Absolute purity of {M}: absolutely pure ({len(ideals)} ideals)")
    return BaerResult(True)


def annihilator(M: Module, P: str, scalars: Subgroup) -> Subgroup:
    """{m ∈ M(P) : m acted on by every element of `scalars` is 0}."""
    fiber = M.fibers[P]
    gens = [r for r in scalars.generators if any(r)]
    if not gens:
        return fiber.whole()
    target = direct_sum_groups([fiber] * len(gens))

    def apply(v):
        return tuple(x for r in gens for x in M.act_ring(Morph(P, P, r), v))

    return GroupHom.from_function(fiber, target, apply).kernel()


def abspure_formula_check(M: Module, phi: PpFormula) -> FormulaCheck:
    """φ(M) = ann_M Dφ(R), with Dφ evaluated on R as a module on the other side."""
    P = _check_one_variable(M, phi, "abspure_formula_check")
    scalars = evaluate(dual(phi), regular_module(M.ringoid, other_side(M.side))).group
    value = evaluate(phi, M).group
    ann = annihilator(M, P, scalars)
    return FormulaCheck(value.key() == ann.key(), value, ann)
