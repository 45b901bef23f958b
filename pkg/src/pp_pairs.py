"""
pp_pairs.py
-----------
The category of pp-pairs: pairs φ/ψ, morphisms defined by pp formulas ρ(x̄, ȳ),
kernels, images and cokernels, closure on modules, Serre membership for the
subcategory generated by a list of modules, and isomorphism after localising
at it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from errors import ArityError, NotAPair, OracleDisagreement, Rejected, SideMismatch
from groups import GroupHom, SubQuotient
from modules import (
    Module,
    RelationColumn,
    acting_category,
    build_module,
    direct_sum,
    finitely_presented,
    regular_module,
    representable,
)
from persistence import log_action
from pp_dsl import parse_formula
from pp_formula import (
    PpFormula,
    check_compatible,
    conj,
    conj_all,
    embed,
    evaluate,
    exists_project,
    implies,
    make_formula,
    pp_sum,
    substitute,
)
from ringoid import Ringoid


@dataclass(frozen=True, eq=False)
class PpPair:
    top: PpFormula
    bottom: PpFormula
    label: str = ""

    @property
    def ringoid(self) -> Ringoid:
        return self.top.ringoid

    @property
    def side(self) -> str:
        return self.top.side

    @property
    def sorts(self) -> tuple[str, ...]:
        return self.top.free_sorts

    def __str__(self) -> str:
        return f"({self.top}) / ({self.bottom})"


def make_pair(phi: PpFormula, psi: PpFormula, label: str = "") -> PpPair:
    """φ/ψ; NotAPair carries the free realization of ψ when ψ ≤ φ fails."""
    check_compatible(phi, psi)
    verdict = implies(psi, phi)
    if not verdict:
        raise NotAPair(verdict.counterexample)
    return PpPair(phi, psi, label)


def pair_value(p: PpPair, M: Module) -> SubQuotient:
    """φ(M)/ψ(M)."""
    return evaluate(p.top, M).group.quotient(evaluate(p.bottom, M).group)


def is_closed_on(p: PpPair, M: Module) -> bool:
    return evaluate(p.top, M).order == evaluate(p.bottom, M).order


# === morphisms ===

@dataclass(frozen=True, eq=False)
class PpMorphism:
    source: PpPair
    target: PpPair
    rho: PpFormula

    @property
    def context(self) -> tuple[str, ...]:
        return self.source.sorts + self.target.sorts

    def __str__(self) -> str:
        return str(self.rho)


def _at_x(f: PpFormula, m: tuple) -> PpFormula:
    n = len(m[0])
    return embed(f, m[0] + m[1], list(range(n)))


def _at_y(f: PpFormula, m: tuple) -> PpFormula:
    n = len(m[0])
    return embed(f, m[0] + m[1], [n + i for i in range(len(m[1]))])


def make_morphism(rho: PpFormula, source: PpPair, target: PpPair) -> PpMorphism:
    """
    Check that ρ(x̄, ȳ) defines a map source → target:
      (1) ρ ∧ φ(x̄) ≤ φ′(ȳ)
      (2) ρ ∧ ψ(x̄) ≤ ψ′(ȳ)
      (3) φ(x̄) ≤ ∃ȳ (ρ ∧ φ′(ȳ))
      (4) ρ(x̄, ȳ₁) ∧ ρ(x̄, ȳ₂) ∧ φ(x̄) ≤ ψ′(ȳ₁ − ȳ₂)
    Raises Rejected with the failing condition and its counterexample.
    """
    xs, ys = source.sorts, target.sorts
    ctx = (xs, ys)
    if rho.free_sorts != xs + ys:
        raise Rejected(0, None, f"ρ must have free sorts {xs + ys}, has {rho.free_sorts}")
    if rho.side != source.side or source.side != target.side:
        raise SideMismatch("morphism, source and target must share a side")
    n, k = len(xs), len(ys)

    phi_x, psi_x = _at_x(source.top, ctx), _at_x(source.bottom, ctx)
    phi_y, psi_y = _at_y(target.top, ctx), _at_y(target.bottom, ctx)

    checks = [
        (1, conj(rho, phi_x), phi_y),
        (2, conj(rho, psi_x), psi_y),
        (3, source.top, exists_project(conj(rho, phi_y), range(n))),
    ]

    A = rho.acting
    triple = xs + ys + ys
    rho1 = embed(rho, triple, list(range(n + k)))
    rho2 = embed(rho, triple, list(range(n)) + [n + k + i for i in range(k)])
    phi3 = embed(source.top, triple, list(range(n)))
    T = []
    for l, Z in enumerate(triple):
        row = []
        for i, Y in enumerate(ys):
            if l == n + i:
                row.append(A.identities[Y])
            elif l == n + k + i:
                row.append(A.hom(Z, Y).neg(A.identities[Y]))
            else:
                row.append(A.hom(Z, Y).zero)
        T.append(row)
    checks.append((4, conj_all([rho1, rho2, phi3]), substitute(target.bottom, triple, T)))

    for index, lower, upper in checks:
        verdict = implies(lower, upper)
        if not verdict:
            raise Rejected(index, verdict.counterexample)
    return PpMorphism(source, target, rho)


def graph_formula(R: Ringoid, side: str, sorts: Sequence[str], T: Sequence[Sequence[Sequence[int]]] | None = None, target_sorts: Sequence[str] | None = None) -> PpFormula:
    """ρ: ȳ = x̄·T (T[i][l] an acting morphism from sort of xᵢ to sort of y_l); T = identity by default."""
    A = acting_category(R, side)
    xs = tuple(sorts)
    ys = tuple(target_sorts) if target_sorts is not None else xs
    if T is None:
        T = [[A.identities[P] if i == l else A.hom(P, ys[l]).zero for l in range(len(ys))] for i, P in enumerate(xs)]
    matrix = []
    for i, P in enumerate(xs):
        matrix.append([A.hom(P, ys[l]).reduce(T[i][l]) for l in range(len(ys))])
    for j, Y in enumerate(ys):
        matrix.append([A.hom(Y, ys[l]).neg(A.identities[Y]) if l == j else A.hom(Y, ys[l]).zero for l in range(len(ys))])
    return make_formula(R, side, xs + ys, (), ys, matrix)


def identity_morphism(p: PpPair) -> PpMorphism:
    return PpMorphism(p, p, graph_formula(p.ringoid, p.side, p.sorts))


def matrix_morphism(source: PpPair, target: PpPair, T: Sequence[Sequence[Sequence[int]]]) -> PpMorphism:
    rho = graph_formula(source.ringoid, source.side, source.sorts, T, target.sorts)
    return make_morphism(rho, source, target)


def compose_morphisms(f: PpMorphism, g: PpMorphism) -> PpMorphism:
    """g ∘ f, with ρ(x̄, z̄) = ∃ȳ (ρ_f(x̄, ȳ) ∧ ρ_g(ȳ, z̄))."""
    xs, ys, zs = f.source.sorts, f.target.sorts, g.target.sorts
    ctx = xs + zs + ys
    nx, nz = len(xs), len(zs)
    rho_f = embed(f.rho, ctx, list(range(nx)) + [nx + nz + i for i in range(len(ys))])
    rho_g = embed(g.rho, ctx, [nx + nz + i for i in range(len(ys))] + [nx + i for i in range(nz)])
    rho = exists_project(conj(rho_f, rho_g), range(nx + nz))
    return make_morphism(rho, f.source, g.target)


def kernel_formula(m: PpMorphism) -> PpFormula:
    """φ ∧ ∃ȳ (ρ ∧ ψ′(ȳ))"""
    n = len(m.source.sorts)
    ctx = (m.source.sorts, m.target.sorts)
    return conj(m.source.top, exists_project(conj(m.rho, _at_y(m.target.bottom, ctx)), range(n)))


@dataclass(frozen=True, eq=False)
class KernelCokernelImage:
    kernel: PpPair
    kernel_inclusion: PpMorphism
    image: PpPair
    cokernel: PpPair
    cokernel_projection: PpMorphism


def kernel_cokernel_image(m: PpMorphism) -> KernelCokernelImage:
    """
    kernel   = φ ∧ ∃ȳ (ρ ∧ ψ′(ȳ))  /  ψ
    image    = ψ′ + ∃x̄ (ρ ∧ φ(x̄))  /  ψ′
    cokernel = φ′  /  image top
    """
    src, tgt = m.source, m.target
    ctx = (src.sorts, tgt.sorts)
    n, k = len(src.sorts), len(tgt.sorts)
    kernel_top = kernel_formula(m)
    image_top = pp_sum(tgt.bottom, exists_project(conj(m.rho, _at_x(src.top, ctx)), range(n, n + k)))
    kernel = make_pair(kernel_top, src.bottom, "ker")
    image = make_pair(image_top, tgt.bottom, "im")
    cokernel = make_pair(tgt.top, image_top, "coker")
    inclusion = make_morphism(graph_formula(src.ringoid, src.side, src.sorts), kernel, src)
    projection = make_morphism(graph_formula(tgt.ringoid, tgt.side, tgt.sorts), tgt, cokernel)
    return KernelCokernelImage(kernel, inclusion, image, cokernel, projection)


def induced_map(m: PpMorphism, M: Module) -> GroupHom:
    """The group map φ(M)/ψ(M) → φ′(M)/ψ′(M) defined by ρ."""
    source_value = pair_value(m.source, M)
    target_value = pair_value(m.target, M)
    ctx = (m.source.sorts, m.target.sorts)
    graph = evaluate(conj(m.rho, _at_x(m.source.top, ctx)), M).group
    pres = graph.presentation
    width = M.power(m.source.sorts).dim
    to_x = GroupHom(pres.group, M.power(m.source.sorts), tuple(e[:width] for e in pres.embedding))
    rows = []
    for b in range(source_value.group.dim):
        a = source_value.lift(source_value.group.basis(b))
        gamma = to_x.preimage_of(a)
        y = pres.embed(gamma)[width:]
        rows.append(target_value.project(y))
    return GroupHom(source_value.group, target_value.group, tuple(rows))


# === closure, Serre membership, localisation ===

def serre_membership(p: PpPair, generators: Sequence[Module]) -> bool:
    """p closed on every generator; double sums are spot-checked against additivity."""
    closed = all(is_closed_on(p, M) for M in generators)
    for M, N in itertools.combinations_with_replacement(generators[:3], 2):
        if is_closed_on(p, direct_sum(M, N)) != (is_closed_on(p, M) and is_closed_on(p, N)):
            raise OracleDisagreement(f"closure of {p} is not additive on {M} ⊕ {N}")
    return closed


@dataclass
class LocalizedIso:
    status: str  # "iso" | "not_iso" | "not_found"
    morphism: PpMorphism | None = None
    direction: str = ""
    certificate: dict = field(default_factory=dict)


def matrix_candidates(source: PpPair, target: PpPair):
    A = source.top.acting
    cells = [(P, Q) for P in source.sorts for Q in target.sorts]
    spaces = [list(A.hom(P, Q).elements()) for P, Q in cells]
    k = len(target.sorts)
    for choice in itertools.product(*spaces):
        yield [list(choice[i * k:(i + 1) * k]) for i in range(len(source.sorts))]


def _search(source: PpPair, target: PpPair, generators: Sequence[Module], budget: list[int]) -> PpMorphism | None:
    if source.sorts == target.sorts:
        candidates = itertools.chain([None], matrix_candidates(source, target))
    else:
        candidates = matrix_candidates(source, target)
    for T in candidates:
        if budget[0] <= 0:
            return None
        budget[0] -= 1
        rho = graph_formula(source.ringoid, source.side, source.sorts, T, target.sorts)
        try:
            m = make_morphism(rho, source, target)
        except Rejected:
            continue
        parts = kernel_cokernel_image(m)
        if serre_membership(parts.kernel, generators) and serre_membership(parts.cokernel, generators):
            return m
    return None


def localized_iso(p: PpPair, q: PpPair, generators: Sequence[Module], search_bound: int = 64) -> LocalizedIso:
    """
    Are p and q isomorphic once pairs closed on the generators are inverted?
    An order mismatch on some generator proves they are not; otherwise matrix
    morphisms ȳ = x̄·T are searched in both directions.
    """
    for M in generators:
        a, b = pair_value(p, M).order, pair_value(q, M).order
        if a != b:
            log_action(f"Localized iso: not iso, orders {a} vs {b} on {M}")
            return LocalizedIso("not_iso", certificate={"module": str(M), "orders": [a, b]})
    budget = [search_bound]
    m = _search(p, q, generators, budget)
    if m is not None:
        return LocalizedIso("iso", m, "forward")
    m = _search(q, p, generators, budget)
    if m is not None:
        return LocalizedIso("iso", m, "backward")
    return LocalizedIso("not_found", certificate={"candidates_tried": search_bound - budget[0]})


# === evaluation at the ringoid ===

def eval_pair_to_module(p: PpPair) -> Module:
    """
    The right module Q ↦ φ((Q,−))/ψ((Q,−)) for a left pair in one variable,
    with right action by precomposition.
    """
    if p.side != "left":
        raise SideMismatch("eval_pair_to_module takes a pair of left formulas")
    if len(p.sorts) != 1:
        raise ArityError(f"eval_pair_to_module needs one free variable, got {len(p.sorts)}")
    R = p.ringoid
    P0 = p.sorts[0]
    values = {Q: pair_value(p, representable(R, Q, "left")) for Q in R.objects}
    fibers = {Q: v.group for Q, v in values.items()}
    actions = {}
    for Q, Qp in itertools.product(R.objects, repeat=2):
        # acting generator Q → Q′ in the opposite is r: Q′ → Q in R
        mats = []
        for r in R.basis(Qp, Q):
            rows = []
            for b in range(fibers[Q].dim):
                f = values[Q].lift(fibers[Q].basis(b))
                rows.append(values[Qp].project(R.compose(f, r.elem, Qp, Q, P0)))
            mats.append(rows)
        actions[(Q, Qp)] = mats
    return build_module(R, "right", fibers, actions, name=f"eval[{p}]")


# === the sorts of F_p[ε] ===

EXAMPLE_SORTS = ("Q1", "Q2", "T1", "I2", "T2")


def simple_module(R: Ringoid, side: str = "right") -> Module:
    """R/εR for R = F_p[ε]/(ε²)."""
    P = R.require_ring("simple_module")
    eps = R.hom(P, P).basis(1)
    M, _ = finitely_presented(R, side, [P], [RelationColumn(P, (eps,))], name="S1")
    return M


def eps_example_sorts(R: Ringoid) -> dict[str, PpPair]:
    """
    The five labelled sorts over F_p[ε]:
      Q1  x = x / x = 0         Q2  xε = 0 / x = 0      T1  ε|x / x = 0
      I2  x = x / ε|x           T2  xε = 0 / ε|x
    """
    P = R.require_ring("eps_example_sorts")
    e = R.label(P, P, 1)
    f = lambda text: parse_formula(text, R, "right")
    everything, zero = f("x = x"), f("x = 0")
    killed, divisible = f(f"x*{e} = 0"), f(f"E y . x = y*{e}")
    return {
        "Q1": make_pair(everything, zero, "Q1"),
        "Q2": make_pair(killed, zero, "Q2"),
        "T1": make_pair(divisible, zero, "T1"),
        "I2": make_pair(everything, divisible, "I2"),
        "T2": make_pair(killed, divisible, "T2"),
    }


def eps_example_table(R: Ringoid) -> dict:
    """Orders on R ⊕ S₁, Serre membership for {R}, and the localisation verdicts."""
    sorts = eps_example_sorts(R)
    regular = regular_module(R, "right")
    test = direct_sum(regular, simple_module(R), "R+S1")
    orders = {name: pair_value(p, test).order for name, p in sorts.items()}
    serre = {name: serre_membership(p, [regular]) for name, p in sorts.items()}
    iso = {}
    for a, b in itertools.combinations(("Q2", "T1", "I2"), 2):
        iso[f"{a}~{b}"] = localized_iso(sorts[a], sorts[b], [regular]).status
    return {"orders": orders, "serre": serre, "localized_iso": iso}


def sampled_pairs(family: Sequence[PpFormula]) -> list[PpPair]:
    """Every φ/ψ with ψ ≤ φ among formulas of one signature in the family."""
    pairs = []
    for phi, psi in itertools.product(family, repeat=2):
        if phi.free_sorts == psi.free_sorts and implies(psi, phi):
            pairs.append(PpPair(phi, psi))
    return pairs
