"""
eliminations.py
---------------
Bounded searches for quantifier-free equivalents of pp formulas and for
pp-definable embeddings of pairs into home sorts, and the harness that runs
both over a sampled family next to the von Neumann regularity test.

Every search is tri-state: found, not found within the bound, or provably
impossible with a certificate. A search never claims impossibility from
exhaustion of a bounded space alone.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from config import DEFAULT_BOUND_COLS
from errors import Rejected
from modules import Module, representable
from persistence import log_action
from pp_formula import (
    PpFormula,
    enumerate_formulas,
    equivalent,
    implies,
    make_formula,
    sampled_formulas,
    trivial_formula,
    zero_formula,
)
from pp_pairs import (
    PpMorphism,
    PpPair,
    graph_formula,
    kernel_formula,
    make_morphism,
    matrix_candidates,
    pair_value,
    sampled_pairs,
)
from ringoid import Ringoid, enumerate_left_ideals, enumerate_right_ideals, is_von_neumann_regular

FOUND = "found"
NOT_FOUND = "not_found_within_bound"
PROVABLY_NONE = "provably_none"


# === quantifier elimination ===

@dataclass
class QeResult:
    status: str
    formula: PpFormula | None = None
    checked: int = 0
    candidates: list[PpFormula] = field(default_factory=list)


def annihilator_formulas(R: Ringoid, side: str) -> list[PpFormula]:
    """
    x·J = 0 (r·x = 0 on the left) for every one-sided ideal J of a ring: up to
    equivalence, every quantifier-free formula in one variable.
    """
    P = R.require_ring("annihilator_formulas")
    ideals = enumerate_right_ideals(R, P) if side == "right" else enumerate_left_ideals(R, P)
    formulas = []
    for J in ideals:
        gens = [g.elem for g in J.generators if any(g.elem)]
        formulas.append(make_formula(R, side, (P,), (), (P,) * len(gens), [gens]))
    return formulas


def qe_search(phi: PpFormula, bound: int = DEFAULT_BOUND_COLS) -> QeResult:
    """
    The first quantifier-free χ ≡ φ. In one variable over a ring the annihilator
    candidates are complete, so exhausting them proves there is none; otherwise
    quantifier-free formulas with at most `bound` columns are enumerated.
    """
    if phi.is_quantifier_free:
        return QeResult(FOUND, phi)
    R = phi.ringoid
    if phi.n == 1 and R.is_ring:
        candidates = annihilator_formulas(R, phi.side)
        for chi in candidates:
            if equivalent(phi, chi):
                log_action(f"QE search for {phi}: {chi}")
                return QeResult(FOUND, chi, len(candidates))
        log_action(f"QE search for {phi}: provably none ({len(candidates)} classes)")
        return QeResult(PROVABLY_NONE, None, len(candidates), candidates)

    checked = 0
    for chi in enumerate_formulas(R, phi.side, phi.free_sorts, 0, bound):
        checked += 1
        if equivalent(phi, chi):
            log_action(f"QE search for {phi}: {chi}")
            return QeResult(FOUND, chi, checked)
    log_action(f"QE search for {phi}: nothing within {bound} columns")
    return QeResult(NOT_FOUND, None, checked)


# === embeddings into home sorts ===

@dataclass
class EmbedResult:
    status: str
    morphism: PpMorphism | None = None
    home: tuple[str, ...] = ()
    certificate: dict = field(default_factory=dict)


def default_home_sorts(R: Ringoid) -> list[tuple[str, ...]]:
    """Every object alone and every product of two objects."""
    singles = [(P,) for P in R.objects]
    doubles = list(itertools.combinations_with_replacement(R.objects, 2))
    return singles + doubles


def home_pair(R: Ringoid, side: str, sorts: Sequence[str]) -> PpPair:
    return PpPair(trivial_formula(R, side, sorts), zero_formula(R, side, sorts), "home")


def has_trivial_kernel(m: PpMorphism) -> bool:
    return bool(implies(kernel_formula(m), m.source.bottom))


def embed_search(
    p: PpPair,
    home: Sequence[Sequence[str]] | None = None,
    bound: int = 64,
    test_modules: Sequence[Module] | None = None,
) -> EmbedResult:
    """
    Search matrix morphisms ȳ = x̄·T from p into each home sort for one with
    trivial kernel. A home sort is ruled out when some test module gives p a
    larger value than the home sort; if every home sort is ruled out, p is not
    embeddable.
    """
    R, side = p.ringoid, p.side
    homes = [tuple(h) for h in home] if home is not None else default_home_sorts(R)
    modules = list(test_modules) if test_modules is not None else [representable(R, P, side) for P in R.objects]

    obstructions = {}
    tried = 0
    for sorts in homes:
        target = home_pair(R, side, sorts)
        for M in modules:
            a, b = pair_value(p, M).order, pair_value(target, M).order
            if a > b:
                obstructions[" ".join(sorts)] = {"module": str(M), "orders": [a, b]}
                break
        if " ".join(sorts) in obstructions:
            continue
        for T in itertools.islice(matrix_candidates(p, target), bound):
            tried += 1
            rho = graph_formula(R, side, p.sorts, T, sorts)
            try:
                m = make_morphism(rho, p, target)
            except Rejected:
                continue
            if has_trivial_kernel(m):
                log_action(f"Embed search for {p}: monic into {sorts} via {rho}")
                return EmbedResult(FOUND, m, sorts)

    if homes and len(obstructions) == len(homes):
        log_action(f"Embed search for {p}: not embeddable in any home sort")
        return EmbedResult(PROVABLY_NONE, certificate=obstructions)
    log_action(f"Embed search for {p}: nothing within {tried} candidates")
    return EmbedResult(NOT_FOUND, certificate={"candidates_tried": tried})


# === harness ===

@dataclass
class HarnessItem:
    kind: str
    subject: str
    status: str
    result: str = ""


@dataclass
class HarnessReport:
    ringoid: str
    regular: bool
    counterexample: str = ""
    items: list[HarnessItem] = field(default_factory=list)
    anomalies: list[str] = field(default_factory=list)

    def count(self, kind: str, status: str) -> int:
        return sum(1 for i in self.items if i.kind == kind and i.status == status)


def vnr_harness(
    R: Ringoid,
    side: str = "right",
    bound_vars: int = 1,
    bound_cols: int = 1,
    qe_bound: int = DEFAULT_BOUND_COLS,
    embed_bound: int = 64,
    max_free: int = 1,
) -> HarnessReport:
    """
    Regularity next to quantifier elimination on the sampled family and
    embeddings of the sampled pairs. On a regular ringoid every search has to
    succeed; anything else is recorded as an anomaly.
    """
    regularity = is_von_neumann_regular(R)
    report = HarnessReport(R.name, regularity.regular, str(regularity.counterexample or ""))
    family = sampled_formulas(R, side, max_free=max_free, max_bound=bound_vars, max_cols=bound_cols)

    for phi in family:
        qe = qe_search(phi, qe_bound)
        report.items.append(HarnessItem("qe", str(phi), qe.status, str(qe.formula or "")))
    for p in sampled_pairs(family):
        found = embed_search(p, bound=embed_bound)
        report.items.append(HarnessItem("embed", str(p), found.status, str(found.morphism or "")))

    if regularity.regular:
        for item in report.items:
            if item.status != FOUND:
                report.anomalies.append(f"{item.kind} failed on a regular ringoid: {item.subject} ({item.status})")
    log_action(
        f"VNR harness on '{R.name}': regular={regularity.regular}, "
        f"{len(report.items)} searches, {len(report.anomalies)} anomalies"
    )
    return report

